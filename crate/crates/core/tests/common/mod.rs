#![allow(dead_code)]

use std::ops::ControlFlow;
use std::sync::OnceLock;

use quasi4::census::{classify_all, collect_reduced, Flags};
use quasi4::dcode::for_each_double_mds_code;
use quasi4::{CellSet, Quasigroup};

/// A subset of Σ² drawn with x₁ running left to right and x₂ bottom to top,
/// top row first.
pub fn picture(rows: [&str; 4]) -> CellSet {
    let mut s = CellSet::empty(2).unwrap();
    for (r, row) in rows.iter().enumerate() {
        let x2 = 3 - r as u8;
        for (x1, c) in row.chars().enumerate() {
            if c == '#' {
                s.insert(quasi4::space::index_of(&[x1 as u8, x2]));
            }
        }
    }
    s
}

pub fn block() -> CellSet {
    picture(["....", "....", "##..", "##.."])
}

pub fn two_blocks() -> CellSet {
    picture(["..##", "..##", "##..", "##.."])
}

pub fn cycle() -> CellSet {
    picture(["..##", ".#.#", "#.#.", "##.."])
}

pub fn hexagon() -> CellSet {
    picture(["....", ".##.", "#.#.", "##.."])
}

/// Every double-MDS-code of Σ³.
pub fn sigma3_corpus() -> &'static [CellSet] {
    static CORPUS: OnceLock<Vec<CellSet>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut all = Vec::new();
        for_each_double_mds_code(3, |s| {
            all.push(s.clone());
            ControlFlow::Continue(())
        })
        .unwrap();
        all
    })
}

pub struct Census {
    pub tables: Vec<Quasigroup>,
    pub flags: Vec<Flags>,
}

/// Reduced n-quasigroups with their flags, n ≤ 4, computed once per process.
pub fn census(n: usize) -> &'static Census {
    static CACHE: [OnceLock<Census>; 5] = [const { OnceLock::new() }; 5];
    CACHE[n].get_or_init(|| {
        let (tables, _) = collect_reduced(n, 4).unwrap();
        let flags = classify_all(&tables, 4).unwrap();
        Census { tables, flags }
    })
}

/// All 576 Latin squares of order 4.
pub fn all_squares() -> Vec<Quasigroup> {
    census(2)
        .tables
        .iter()
        .flat_map(quasi4::census::reduction_fiber)
        .collect()
}
