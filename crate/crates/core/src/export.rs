//! Graphviz output for systems and covers.

use std::fmt::Write;

use crate::constraint::CouplingSystem;
use crate::torsor::DoubleCover;

/// Undirected graph of the 1-skeleton. Opposition edges are bold, free
/// edges dashed, pinned vertices labelled with their value.
pub fn system_dot(sys: &CouplingSystem) -> String {
    let x = sys.complex();
    let c = sys.effective_coupling();
    let mut out = String::from("graph system {\n");
    for v in 0..x.n_vertices() {
        match sys.pinned().get(&v) {
            Some(&b) => writeln!(out, "  v{v} [label=\"{v}={}\", shape=box];", b as u8),
            None => writeln!(out, "  v{v};"),
        }
        .expect("write to string");
    }
    for (e, &(u, v)) in x.edges().iter().enumerate() {
        let style = if !sys.is_constraint(e) {
            "dashed"
        } else if c.get(e) {
            "bold"
        } else {
            "solid"
        };
        writeln!(out, "  v{u} -- v{v} [label=\"e{e}\", style={style}];").expect("write to string");
    }
    out.push_str("}\n");
    out
}

/// The total space, sheet 0 before sheet 1; crossed lifts are red.
pub fn cover_dot(cover: &DoubleCover) -> String {
    let n = cover.n_base_vertices();
    let mut out = String::from("graph cover {\n");
    for sheet in [false, true] {
        for v in 0..n {
            writeln!(out, "  s{}_{v} [label=\"{v}/{}\"];", sheet as u8, sheet as u8).expect("write to string");
        }
    }
    for (i, (a, b)) in cover.lifted_edges().into_iter().enumerate() {
        let (u, su) = cover.project(a);
        let (v, sv) = cover.project(b);
        let attr = if cover.is_crossed(i / 2) { " [color=red]" } else { "" };
        writeln!(out, "  s{}_{u} -- s{}_{v}{attr};", su as u8, sv as u8).expect("write to string");
    }
    out.push_str("}\n");
    out
}
