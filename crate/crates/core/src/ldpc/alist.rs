//! Reading and writing parity-check matrices in alist format.
//!
//! Layout: `n m`, `max_col_deg max_row_deg`, the column degrees, the row
//! degrees, then one line of 1-based row indices per column and one line of
//! 1-based column indices per row. Short lines are zero-padded.

use std::fmt::Write as _;

use super::peg::TannerGraph;
use super::LdpcError;

pub fn write_alist(graph: &TannerGraph) -> String {
    let n = graph.n_vars();
    let m = graph.n_checks();
    let max_col = graph.var_adj.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = graph.check_adj.iter().map(Vec::len).max().unwrap_or(0);
    let join = |items: &mut dyn Iterator<Item = usize>| {
        items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "{n} {m}");
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(&mut graph.var_adj.iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(&mut graph.check_adj.iter().map(Vec::len)));
    for checks in &graph.var_adj {
        let mut sorted = checks.clone();
        sorted.sort_unstable();
        let padded = sorted.iter().map(|c| c + 1).chain(std::iter::repeat(0)).take(max_col);
        let _ = writeln!(out, "{}", join(&mut padded.into_iter()));
    }
    for vars in &graph.check_adj {
        let padded = vars.iter().map(|v| v + 1).chain(std::iter::repeat(0)).take(max_row);
        let _ = writeln!(out, "{}", join(&mut padded.into_iter()));
    }
    out
}

pub fn parse_alist(text: &str) -> Result<TannerGraph, LdpcError> {
    let bad = |msg: &str| LdpcError::Alist(msg.to_string());
    let mut nums = text.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|_| LdpcError::Alist(format!("not an integer: {t:?}")))
    });
    let mut next = || nums.next().unwrap_or_else(|| Err(bad("unexpected end of input")));
    let n = next()?;
    let m = next()?;
    let max_col = next()?;
    let max_row = next()?;
    let col_deg = (0..n).map(|_| next()).collect::<Result<Vec<_>, _>>()?;
    let row_deg = (0..m).map(|_| next()).collect::<Result<Vec<_>, _>>()?;
    let mut var_adj = Vec::with_capacity(n);
    for &d in &col_deg {
        let entries = (0..max_col).map(|_| next()).collect::<Result<Vec<_>, _>>()?;
        let list: Vec<usize> = entries.iter().filter(|&&x| x != 0).map(|x| x - 1).collect();
        if list.len() != d || list.iter().any(|&c| c >= m) {
            return Err(bad("column list disagrees with header"));
        }
        var_adj.push(list);
    }
    let mut check_adj = Vec::with_capacity(m);
    for &d in &row_deg {
        let entries = (0..max_row).map(|_| next()).collect::<Result<Vec<_>, _>>()?;
        let mut list: Vec<usize> = entries.iter().filter(|&&x| x != 0).map(|x| x - 1).collect();
        if list.len() != d || list.iter().any(|&v| v >= n) {
            return Err(bad("row list disagrees with header"));
        }
        list.sort_unstable();
        check_adj.push(list);
    }
    for (v, checks) in var_adj.iter().enumerate() {
        if checks.iter().any(|&c| check_adj[c].binary_search(&v).is_err()) {
            return Err(bad("column and row lists are inconsistent"));
        }
    }
    Ok(TannerGraph { var_adj, check_adj })
}
