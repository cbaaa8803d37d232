//! Plain-text export of a gluing LP.
//!
//! ```text
//! # sclab gluing lp
//! minimize 1/4 * (sum of triangle variables)
//! variables <count>
//! x<j> square <w>:<i> <w>:<i>
//! x<j> triangle <g> <g> <g>
//! constraints <count>
//! r<i> balance <g> <g> : <coef> x<j> ... = 0
//! r<i> cover <w>:<i> : <coef> x<j> ... = <p/q>
//! end
//! ```
//!
//! Positions and gaps are written `word:index`; all variables are
//! nonnegative and every coefficient is an integer.

use std::fmt::Write;

use super::pieces::{GluingLp, PieceSystem};

pub fn export_lp(sys: &PieceSystem, glp: &GluingLp) -> String {
    let pos = |p: usize| {
        let q = sys.position(p);
        format!("{}:{}", q.word, q.index)
    };
    let mut out = String::new();
    out.push_str("# sclab gluing lp\n");
    out.push_str("minimize 1/4 * (sum of triangle variables)\n");
    let _ = writeln!(out, "variables {}", glp.lp.columns.len());
    for (j, s) in sys.squares().iter().enumerate() {
        let _ = writeln!(out, "x{j} square {} {}", pos(s[0]), pos(s[1]));
    }
    for (k, t) in sys.triangles().iter().enumerate() {
        let j = glp.square_count + k;
        let _ = writeln!(out, "x{j} triangle {} {} {}", pos(t[0]), pos(t[1]), pos(t[2]));
    }
    let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); glp.lp.rows];
    for (j, col) in glp.lp.columns.iter().enumerate() {
        for &(i, a) in col {
            rows[i].push((j, a));
        }
    }
    let _ = writeln!(out, "constraints {}", glp.lp.rows);
    for (i, row) in rows.iter().enumerate() {
        let head = if i < glp.coverage_start {
            let (a, b) = glp.balance_pairs[i];
            format!("r{i} balance {} {}", pos(a), pos(b))
        } else {
            format!("r{i} cover {}", pos(i - glp.coverage_start))
        };
        let terms: Vec<String> = row.iter().map(|(j, a)| format!("{a} x{j}")).collect();
        let _ = writeln!(out, "{head} : {} = {}", terms.join(" "), glp.lp.rhs[i]);
    }
    out.push_str("end\n");
    out
}
