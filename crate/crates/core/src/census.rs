//! Exhaustive enumeration of reduced n-quasigroups and the counting bounds
//! built on the exact counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use itertools::Itertools;

use crate::quasigroup::{
    is_decomposable_oracle, is_linear, is_semilinear, QEquivalence, Quasigroup,
};
use crate::space::{digit, stride, volume, with_digit, Perm4};

/// Largest arity the census engine accepts.
pub const MAX_CENSUS_DIM: usize = 5;
/// Arities from here on need an explicit long-run opt-in.
pub const LONG_RUN_DIM: usize = 5;
/// Largest arity for which tables are retained and classified.
pub const MAX_CLASSIFY_DIM: usize = 4;

/// Published counts v*₁..v*₅ of reduced n-quasigroups of order 4.
pub const PUBLISHED_V_STAR: [u64; 5] = [1, 4, 64, 7132, 201_538_000];
/// Published count of non-semilinear reduced 3-quasigroups.
pub const PUBLISHED_T3_STAR: u64 = 18;

pub fn published_v_star(n: usize) -> Result<u64> {
    n.checked_sub(1)
        .and_then(|i| PUBLISHED_V_STAR.get(i))
        .copied()
        .ok_or_else(|| Error::MissingData(format!("no published v* for n={n}")))
}

fn check_census_dim(n: usize, long_run: bool) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    if n > MAX_CENSUS_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_CENSUS_DIM,
        });
    }
    if n >= LONG_RUN_DIM && !long_run {
        return Err(Error::precondition(format!(
            "a census at n={n} needs the long-run flag"
        )));
    }
    Ok(())
}

/// Search statistics. A node is one successful cell placement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub count: u64,
    pub nodes: u64,
}

impl std::ops::Add for SearchStats {
    type Output = SearchStats;
    fn add(self, o: SearchStats) -> SearchStats {
        SearchStats {
            count: self.count + o.count,
            nodes: self.nodes + o.nodes,
        }
    }
}

/// Static layout of the reduced search: free cells in index order and, for
/// each, the ids of its n axis lines.
///
/// Cells with x₀ = 3 come last and are never searched: once the other three
/// layers along axis 0 are placed, each such cell takes the one symbol
/// missing from its axis-0 line, and the resulting layer is Latin. They still
/// count as nodes, one per cell per leaf, exactly as a search would.
struct Grid {
    n: usize,
    free: Vec<usize>,
    stop: usize,
    lines: Vec<u32>,
    table: Vec<u8>,
    masks: Vec<u8>,
}

impl Grid {
    fn new(n: usize) -> Self {
        let vol = volume(n);
        let per_axis = vol / 4;
        let line_of = |i: usize, axis: usize| {
            let s = stride(n, axis);
            (axis * per_axis + (i / (4 * s)) * s + i % s) as u32
        };
        let mut table = vec![u8::MAX; vol];
        let mut masks = vec![0u8; n * per_axis];
        for axis in 0..n {
            for a in 0..4u8 {
                let i = with_digit(0, n, axis, a);
                table[i] = a;
            }
        }
        for (i, &v) in table.iter().enumerate() {
            if v != u8::MAX {
                for axis in 0..n {
                    masks[line_of(i, axis) as usize] |= 1 << v;
                }
            }
        }
        let free: Vec<usize> = (0..vol).filter(|&i| table[i] == u8::MAX).collect();
        let stop = free
            .iter()
            .take_while(|&&i| n < 2 || digit(i, n, 0) < 3)
            .count();
        let lines = free
            .iter()
            .flat_map(|&i| (0..n).map(move |axis| line_of(i, axis)))
            .collect();
        Grid {
            n,
            free,
            stop,
            lines,
            table,
            masks,
        }
    }

    fn start(&self) -> State {
        State {
            table: self.table.clone(),
            masks: self.masks.clone(),
        }
    }

    #[inline]
    fn options(&self, st: &State, pos: usize) -> u8 {
        let used = self.lines[pos * self.n..(pos + 1) * self.n]
            .iter()
            .fold(0u8, |m, &l| m | st.masks[l as usize]);
        !used & 0xF
    }

    #[inline]
    fn place(&self, st: &mut State, pos: usize, v: u8) {
        st.table[self.free[pos]] = v;
        for &l in &self.lines[pos * self.n..(pos + 1) * self.n] {
            st.masks[l as usize] |= 1 << v;
        }
    }

    #[inline]
    fn unplace(&self, st: &mut State, pos: usize, v: u8) {
        st.table[self.free[pos]] = u8::MAX;
        for &l in &self.lines[pos * self.n..(pos + 1) * self.n] {
            st.masks[l as usize] &= !(1 << v);
        }
    }

    fn fill_tail(&self, st: &mut State) {
        let s = stride(self.n, 0);
        for &i in &self.free[self.stop..] {
            st.table[i] = 6 - st.table[i - s] - st.table[i - 2 * s] - st.table[i - 3 * s];
        }
    }

    /// Depth-first search from `pos`; with `FILL` false the visitor sees a
    /// table whose last layer is stale.
    fn dfs<const FILL: bool, V: FnMut(&[u8]) -> ControlFlow<()>>(
        &self,
        st: &mut State,
        pos: usize,
        stats: &mut SearchStats,
        visit: &mut V,
    ) -> ControlFlow<()> {
        if pos == self.stop {
            stats.count += 1;
            stats.nodes += (self.free.len() - self.stop) as u64;
            if FILL {
                self.fill_tail(st);
            }
            return visit(&st.table);
        }
        let mut opts = self.options(st, pos);
        while opts != 0 {
            let v = opts.trailing_zeros() as u8;
            opts &= opts - 1;
            self.place(st, pos, v);
            stats.nodes += 1;
            let flow = self.dfs::<FILL, V>(st, pos + 1, stats, visit);
            self.unplace(st, pos, v);
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// All valid assignments of the first `depth` free cells, in search
    /// order, together with the nodes spent reaching them.
    fn prefixes(&self, min_count: usize) -> (usize, Vec<Vec<u8>>, u64) {
        let mut level: Vec<Vec<u8>> = vec![Vec::new()];
        let mut nodes = 0u64;
        let mut depth = 0;
        while level.len() < min_count && depth < self.stop {
            let mut next = Vec::new();
            for prefix in &level {
                let mut st = self.replay(prefix);
                let mut opts = self.options(&st, depth);
                while opts != 0 {
                    let v = opts.trailing_zeros() as u8;
                    opts &= opts - 1;
                    self.place(&mut st, depth, v);
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                    self.unplace(&mut st, depth, v);
                }
            }
            nodes += next.len() as u64;
            level = next;
            depth += 1;
        }
        (depth, level, nodes)
    }

    fn replay(&self, prefix: &[u8]) -> State {
        let mut st = self.start();
        for (pos, &v) in prefix.iter().enumerate() {
            self.place(&mut st, pos, v);
        }
        st
    }

    fn run_prefix<const FILL: bool, V: FnMut(&[u8]) -> ControlFlow<()>>(
        &self,
        prefix: &[u8],
        visit: &mut V,
    ) -> SearchStats {
        let mut st = self.replay(prefix);
        let mut stats = SearchStats::default();
        let _ = self.dfs::<FILL, V>(&mut st, prefix.len(), &mut stats, visit);
        stats
    }
}

struct State {
    table: Vec<u8>,
    masks: Vec<u8>,
}

/// Visits every reduced n-quasigroup (n ≤ 4) once, in search order.
///
/// Cells on the axes through 0̄ are prefilled by the reduced condition; the
/// other cells are filled in index order, trying symbols 0..3, with
/// per-line used-symbol masks for pruning.
pub fn enumerate_reduced(
    n: usize,
    mut visit: impl FnMut(&[u8]) -> ControlFlow<()>,
) -> Result<SearchStats> {
    check_census_dim(n, false)?;
    let grid = Grid::new(n);
    let mut st = grid.start();
    let mut stats = SearchStats::default();
    let _ = grid.dfs::<true, _>(&mut st, 0, &mut stats, &mut visit);
    Ok(stats)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::precondition(format!("thread pool: {e}")))
}

fn split_target(jobs: usize) -> usize {
    64 * jobs.max(1)
}

/// Counts reduced n-quasigroups on `jobs` worker threads.
pub fn count_reduced(n: usize, jobs: usize, long_run: bool) -> Result<SearchStats> {
    check_census_dim(n, long_run)?;
    let grid = Grid::new(n);
    if jobs <= 1 {
        let mut st = grid.start();
        let mut stats = SearchStats::default();
        let _ = grid.dfs::<false, _>(&mut st, 0, &mut stats, &mut |_: &[u8]| {
            ControlFlow::Continue(())
        });
        return Ok(stats);
    }
    let (_, prefixes, prefix_nodes) = grid.prefixes(split_target(jobs));
    let total = pool(jobs)?.install(|| {
        prefixes
            .par_iter()
            .map(|p| grid.run_prefix::<false, _>(p, &mut |_: &[u8]| ControlFlow::Continue(())))
            .reduce(SearchStats::default, |a, b| a + b)
    });
    Ok(total
        + SearchStats {
            count: 0,
            nodes: prefix_nodes,
        })
}

/// All reduced n-quasigroups (n ≤ 4) in search order.
pub fn collect_reduced(n: usize, jobs: usize) -> Result<(Vec<Quasigroup>, SearchStats)> {
    check_census_dim(n, false)?;
    let grid = Grid::new(n);
    let (_, prefixes, prefix_nodes) = grid.prefixes(split_target(jobs));
    let parts: Vec<(Vec<Quasigroup>, SearchStats)> = pool(jobs)?.install(|| {
        prefixes
            .par_iter()
            .map(|p| {
                let mut found = Vec::new();
                let stats = grid.run_prefix::<true, _>(p, &mut |t: &[u8]| {
                    found.push(Quasigroup::from_raw(n, t.to_vec()));
                    ControlFlow::Continue(())
                });
                (found, stats)
            })
            .collect()
    });
    let mut all = Vec::new();
    let mut stats = SearchStats {
        count: 0,
        nodes: prefix_nodes,
    };
    for (found, s) in parts {
        all.extend(found);
        stats = stats + s;
    }
    Ok((all, stats))
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    n: usize,
    depth: usize,
    prefixes: usize,
    prefix_nodes: u64,
    done: BTreeMap<usize, SearchStats>,
}

fn write_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let text = serde_json::to_string(cp).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(&tmp, text)
        .map_err(|e| Error::precondition(format!("writing {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| Error::precondition(format!("writing {}: {e}", path.display())))
}

/// Counts with a resumable record of finished prefixes kept at `path`.
/// `progress` receives (finished prefixes, total prefixes) after each batch.
pub fn count_reduced_checkpointed(
    n: usize,
    jobs: usize,
    long_run: bool,
    path: &Path,
    mut progress: impl FnMut(usize, usize),
) -> Result<SearchStats> {
    check_census_dim(n, long_run)?;
    let grid = Grid::new(n);
    let (depth, prefixes, prefix_nodes) = grid.prefixes(split_target(jobs));
    let mut cp = match fs::read_to_string(path) {
        Ok(text) => {
            let cp: Checkpoint = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("checkpoint {}: {e}", path.display())))?;
            if cp.n != n || cp.depth != depth || cp.prefixes != prefixes.len() {
                return Err(Error::precondition(format!(
                    "checkpoint {} was written for a different split",
                    path.display()
                )));
            }
            cp
        }
        Err(_) => Checkpoint {
            n,
            depth,
            prefixes: prefixes.len(),
            prefix_nodes,
            done: BTreeMap::new(),
        },
    };
    let todo: Vec<usize> = (0..prefixes.len())
        .filter(|i| !cp.done.contains_key(i))
        .collect();
    let workers = pool(jobs)?;
    for batch in todo.chunks(4 * jobs.max(1)) {
        let results: Vec<(usize, SearchStats)> = workers.install(|| {
            batch
                .par_iter()
                .map(|&i| {
                    (
                        i,
                        grid.run_prefix::<false, _>(&prefixes[i], &mut |_: &[u8]| {
                            ControlFlow::Continue(())
                        }),
                    )
                })
                .collect()
        });
        cp.done.extend(results);
        write_checkpoint(path, &cp)?;
        progress(cp.done.len(), cp.prefixes);
    }
    let total = cp.done.values().fold(SearchStats::default(), |a, &b| a + b);
    Ok(total
        + SearchStats {
            count: 0,
            nodes: cp.prefix_nodes,
        })
}

/// Equivalence classes of a complete list of reduced m-quasigroups, as
/// (index of the first member, class size).
///
/// Every reduced table equivalent to f is obtained from f by permuting
/// coordinates, moving the base point, reducing, and conjugating by a
/// permutation π fixing 0 (π∘g(π⁻¹y₁,…,π⁻¹yₘ)), so one orbit costs
/// 6·m!·4ᵐ tables.
pub fn reduced_classes(tables: &[Quasigroup]) -> Result<Vec<(usize, u64)>> {
    let Some(first) = tables.first() else {
        return Ok(Vec::new());
    };
    let m = first.arity();
    let position: HashMap<&Quasigroup, usize> =
        tables.iter().enumerate().map(|(i, q)| (q, i)).collect();
    let fixing_zero = Perm4::all_reduced();
    let mut class_of = vec![usize::MAX; tables.len()];
    let mut classes = Vec::new();
    for start in 0..tables.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut size = 0u64;
        for sigma in (0..m).permutations(m) {
            for base in 0..volume(m) {
                let mut taus = vec![Perm4::IDENTITY];
                taus.extend((0..m).map(|j| Perm4::transposition(0, digit(base, m, j))));
                let (_, g) = QEquivalence::new(sigma.clone(), taus)?
                    .apply(&tables[start])?
                    .reduce();
                for pi in &fixing_zero {
                    let mut taus = vec![*pi];
                    taus.resize(m + 1, pi.inverse());
                    let h = QEquivalence::new((0..m).collect(), taus)?.apply(&g)?;
                    let i = *position.get(&h).ok_or_else(|| {
                        Error::precondition("table list is not closed under equivalence")
                    })?;
                    if class_of[i] == usize::MAX {
                        class_of[i] = id;
                        size += 1;
                    } else if class_of[i] != id {
                        return Err(Error::defect("equivalence orbits overlap"));
                    }
                }
            }
        }
        classes.push((start, size));
    }
    Ok(classes)
}

/// Result of [`count_reduced_by_first_layer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstLayerCount {
    pub count: u64,
    pub classes: usize,
    /// Nodes of the completion searches, one per class.
    pub nodes: u64,
}

/// Counts reduced n-quasigroups (2 ≤ n ≤ 5) through their layer x₀ = 0.
///
/// That layer is a reduced (n−1)-quasigroup, and the number of reduced
/// completions of it depends only on its equivalence class: an equivalence
/// of the layer extends to all of f and maps completions to completions,
/// and among the 6 orders of the layers x₀ = 1, 2, 3 exactly one is
/// reduced. So one completion search per class suffices.
pub fn count_reduced_by_first_layer(n: usize, jobs: usize) -> Result<FirstLayerCount> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    check_census_dim(n, true)?;
    let (layers, _) = collect_reduced(n - 1, jobs)?;
    let classes = reduced_classes(&layers)?;
    let grid = Grid::new(n);
    let layer_cells = grid.free.iter().take_while(|&&i| i < volume(n - 1)).count();
    let per_class: Vec<(u64, SearchStats)> = pool(jobs)?.install(|| {
        classes
            .par_iter()
            .map(|&(rep, size)| {
                let prefix: Vec<u8> = grid.free[..layer_cells]
                    .iter()
                    .map(|&i| layers[rep].at(i))
                    .collect();
                (
                    size,
                    grid.run_prefix::<false, _>(&prefix, &mut |_: &[u8]| ControlFlow::Continue(())),
                )
            })
            .collect()
    });
    Ok(FirstLayerCount {
        count: per_class.iter().map(|(size, st)| size * st.count).sum(),
        classes: classes.len(),
        nodes: per_class.iter().map(|(_, st)| st.nodes).sum(),
    })
}

/// Classification flags of one quasigroup, as used by the census.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub linear: bool,
    pub semilinear: bool,
    pub decomposable: bool,
}

impl Flags {
    pub fn of(f: &Quasigroup) -> Self {
        Flags {
            linear: is_linear(f),
            semilinear: is_semilinear(f).is_some(),
            decomposable: f.arity() >= 3
                && is_decomposable_oracle(f).expect("arity checked").is_some(),
        }
    }
}

/// Classes of n-quasigroups closed under equivalence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuasigroupClass {
    /// Every quasigroup (V).
    All,
    /// Semilinear (K).
    Semilinear,
    /// Not semilinear (T = V ∖ K).
    NonSemilinear,
    /// Decomposable (R).
    Decomposable,
    /// Neither semilinear nor decomposable (W = T ∖ R).
    Wild,
}

impl QuasigroupClass {
    pub fn contains(self, flags: Flags) -> bool {
        match self {
            QuasigroupClass::All => true,
            QuasigroupClass::Semilinear => flags.semilinear,
            QuasigroupClass::NonSemilinear => !flags.semilinear,
            QuasigroupClass::Decomposable => flags.decomposable,
            QuasigroupClass::Wild => !flags.semilinear && !flags.decomposable,
        }
    }
}

/// Exact class sizes among reduced n-quasigroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassCounts {
    pub n: usize,
    pub v_star: u64,
    pub k_star: u64,
    pub linear_star: u64,
    pub r_star: u64,
    pub t_star: u64,
    pub w_star: u64,
    pub nodes: u64,
}

/// Classifies a list of reduced quasigroups of one arity.
pub fn classify_all(quasigroups: &[Quasigroup], jobs: usize) -> Result<Vec<Flags>> {
    Ok(pool(jobs)?.install(|| quasigroups.par_iter().map(Flags::of).collect()))
}

pub fn count_classes(n: usize, flags: &[Flags]) -> ClassCounts {
    let count = |p: &dyn Fn(&Flags) -> bool| flags.iter().filter(|f| p(f)).count() as u64;
    let v_star = flags.len() as u64;
    let k_star = count(&|f| f.semilinear);
    ClassCounts {
        n,
        v_star,
        k_star,
        linear_star: count(&|f| f.linear),
        r_star: count(&|f| f.decomposable),
        t_star: v_star - k_star,
        w_star: count(&|f| QuasigroupClass::Wild.contains(*f)),
        nodes: 0,
    }
}

/// Enumerates and classifies every reduced n-quasigroup, n ≤ 4.
pub fn classify_census(n: usize, jobs: usize) -> Result<ClassCounts> {
    if n > MAX_CLASSIFY_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_CLASSIFY_DIM,
        });
    }
    let (all, stats) = collect_reduced(n, jobs)?;
    let flags = classify_all(&all, jobs)?;
    Ok(ClassCounts {
        nodes: stats.nodes,
        ..count_classes(n, &flags)
    })
}

fn pow(base: u32, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

fn two_pow(exp: usize) -> BigUint {
    BigUint::one() << exp
}

/// 4·6ⁿ, the size of every fiber of the reduction map.
pub fn fiber_size(n: usize) -> BigUint {
    BigUint::from(4u32) * pow(6, n)
}

/// The count of all n-quasigroups in a class with `star` reduced members.
pub fn total_from_reduced(n: usize, star: u64) -> BigUint {
    fiber_size(n) * BigUint::from(star)
}

/// k*ₙ = 3·2^{2ⁿ−n−1} − 2.
pub fn formula_k_star(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    if n > 24 {
        return Err(Error::DimensionTooLarge { n, max: 24 });
    }
    Ok(BigUint::from(3u32) * two_pow((1usize << n) - n - 1) - BigUint::from(2u32))
}

/// kₙ = 3ⁿ⁺¹·2^{2ⁿ+1} − 8·6ⁿ, checked against 4·6ⁿ·k*ₙ.
pub fn formula_k(n: usize) -> Result<BigUint> {
    let k_star = formula_k_star(n)?;
    let k = pow(3, n + 1) * two_pow((1usize << n) + 1) - BigUint::from(8u32) * pow(6, n);
    if k != fiber_size(n) * k_star {
        return Err(Error::defect(format!(
            "closed forms for k and k* disagree at n={n}"
        )));
    }
    Ok(k)
}

/// |K*ₙ(0,x)| = 2^{2ⁿ−n−1}, the reduced quasigroups with a linear S_{0,x}.
pub fn formula_pair_class_star(n: usize) -> Result<BigUint> {
    if n == 0 || n > 24 {
        return Err(Error::precondition(format!("n={n} outside 1..=24")));
    }
    Ok(two_pow((1usize << n) - n - 1))
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

/// Σ_{m=2}^{n−1} C(n,m)·v*_{n−m+1}·v*_m, with v*ᵢ = `v_star[i−1]`.
pub fn bound_r_star(n: usize, v_star: &[u64]) -> Result<BigUint> {
    let get = |i: usize| {
        v_star
            .get(i.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::MissingData(format!("v*_{i} unknown")))
    };
    let mut total = BigUint::zero();
    for m in 2..n {
        total += binomial(n, m) * BigUint::from(get(n - m + 1)?) * BigUint::from(get(m)?);
    }
    Ok(total)
}

/// mₙ, the number of MDS codes in Σⁿ, equal to v_{n−1}.
pub fn mds_code_count(n: usize, v_star: &[u64]) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let prev = v_star
        .get(n - 2)
        .copied()
        .ok_or_else(|| Error::MissingData(format!("v*_{} unknown", n - 1)))?;
    Ok(total_from_reduced(n - 1, prev))
}

/// One instantiated inequality or identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl BoundCheck {
    pub fn le(name: impl Into<String>, lhs: &BigUint, rhs: &BigUint) -> Self {
        BoundCheck {
            name: name.into(),
            relation: "<=".into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds: lhs <= rhs,
        }
    }

    pub fn eq(name: impl Into<String>, lhs: &BigUint, rhs: &BigUint) -> Self {
        BoundCheck {
            name: name.into(),
            relation: "=".into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds: lhs == rhs,
        }
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds { "holds" } else { "FAILS" };
        write!(
            f,
            "{}: {} {} {} {}",
            self.name, self.lhs, self.relation, self.rhs, verdict
        )
    }
}

/// 3ⁿ⁺¹·2^{2ⁿ+1} ≤ vₙ ≤ (3ⁿ⁺¹+1)·2^{2ⁿ+1}, stated for n ≥ 5.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichVerdict {
    pub n: usize,
    pub v: BigUint,
    pub lower: BigUint,
    pub upper: BigUint,
    pub applicable: bool,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl SandwichVerdict {
    /// The sandwich for n ≥ 5; for n = 4 only the lower bound is claimed.
    pub fn holds(&self) -> Option<bool> {
        if self.applicable {
            Some(self.lower_holds && self.upper_holds)
        } else if self.n == 4 {
            Some(self.lower_holds)
        } else {
            None
        }
    }
}

impl fmt::Display for SandwichVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} v={}", self.n, self.v)?;
        writeln!(f, "lower={} upper={}", self.lower, self.upper)?;
        let word = |b: bool| if b { "holds" } else { "FAILS" };
        if self.applicable {
            write!(f, "sandwich {}", word(self.lower_holds && self.upper_holds))
        } else if self.n == 4 {
            write!(
                f,
                "sandwich not applicable (n<5); lower bound {}",
                word(self.lower_holds)
            )
        } else {
            write!(f, "sandwich not applicable (n<5)")
        }
    }
}

pub fn verify_count_sandwich(n: usize, v_star: u64) -> Result<SandwichVerdict> {
    if n == 0 || n > 24 {
        return Err(Error::precondition(format!("n={n} outside 1..=24")));
    }
    let v = total_from_reduced(n, v_star);
    let base = two_pow((1usize << n) + 1);
    let lower = pow(3, n + 1) * &base;
    let upper = (pow(3, n + 1) + BigUint::one()) * &base;
    Ok(SandwichVerdict {
        n,
        lower_holds: lower <= v,
        upper_holds: v <= upper,
        v,
        lower,
        upper,
        applicable: n >= 5,
    })
}

/// Isotopes τ₀g(τ₁x₁,…,τₙxₙ) of a reduced g with τ₀ = (0 c) and every τᵢ
/// fixing 0; these are exactly the quasigroups whose reduced form is g.
pub fn reduction_fiber(g: &Quasigroup) -> Vec<Quasigroup> {
    let n = g.arity();
    let reduced = Perm4::all_reduced();
    let mut out = Vec::new();
    let mut taus = vec![0usize; n];
    loop {
        let inputs: Vec<Perm4> = taus.iter().map(|&t| reduced[t].inverse()).collect();
        let base: Vec<u8> = (0..volume(n))
            .map(|i| {
                let src = (0..n).fold(0, |acc, a| {
                    (acc << 2) | inputs[a].apply(digit(i, n, a)) as usize
                });
                g.at(src)
            })
            .collect();
        for c in 0..4u8 {
            let t0 = Perm4::transposition(0, c);
            out.push(Quasigroup::from_raw(
                n,
                base.iter().map(|&v| t0.apply(v)).collect(),
            ));
        }
        let mut a = 0;
        while a < n {
            taus[a] += 1;
            if taus[a] < reduced.len() {
                break;
            }
            taus[a] = 0;
            a += 1;
        }
        if a == n {
            return out;
        }
    }
}

/// Whether f(x̄) ≠ g(x̄) everywhere.
pub fn compatible(f: &Quasigroup, g: &Quasigroup) -> bool {
    f.table().iter().zip(g.table()).all(|(a, b)| a != b)
}

/// All members of a class among n-quasigroups, n ≤ 3, with their flags.
pub fn expand_class(n: usize, class: QuasigroupClass, jobs: usize) -> Result<Vec<Quasigroup>> {
    if n > 3 {
        return Err(Error::DimensionTooLarge { n, max: 3 });
    }
    let (reduced, _) = collect_reduced(n, jobs)?;
    let flags = classify_all(&reduced, jobs)?;
    Ok(reduced
        .iter()
        .zip(flags)
        .filter(|(_, fl)| class.contains(*fl))
        .flat_map(|(g, _)| reduction_fiber(g))
        .collect())
}

/// |F(g) ∩ W|, the members of `class` nowhere agreeing with g (n ≤ 3).
pub fn compatible_count(g: &Quasigroup, class: QuasigroupClass, jobs: usize) -> Result<usize> {
    let members = expand_class(g.arity(), class, jobs)?;
    Ok(members.iter().filter(|f| compatible(f, g)).count())
}

/// |Uₙ| for W = `class` in arity n−1: the partial quasigroups on two layers
/// whose layers both lie in W. Computed as Σ_{g∈W} |F(g)∩W| with the sum
/// taken over reduced g and scaled by the fiber size, which is valid since
/// isotopy preserves both W and compatibility. Requires n−1 ≤ 3.
pub fn two_layer_count(n: usize, class: QuasigroupClass, jobs: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let m = n - 1;
    let members = expand_class(m, class, jobs)?;
    let (reduced, _) = collect_reduced(m, jobs)?;
    let flags = classify_all(&reduced, jobs)?;
    let per_reduced: u64 = pool(jobs)?.install(|| {
        reduced
            .par_iter()
            .zip(flags.par_iter())
            .filter(|(_, fl)| class.contains(**fl))
            .map(|(g, _)| members.iter().filter(|f| compatible(f, g)).count() as u64)
            .sum()
    });
    Ok(fiber_size(m) * BigUint::from(per_reduced))
}

/// The inequalities checked against exact census data for one arity.
///
/// Needs classification of arities n, n−1 and (for n ≥ 4) 3, so n ≤ 4.
pub fn verify_inequalities(n: usize, jobs: usize) -> Result<Vec<BoundCheck>> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    let counts = classify_census(n, jobs)?;
    let mut checks = census_bounds(&counts, jobs)?;
    if n >= 4 {
        let built = superposition_lower_witnesses(n, jobs)?;
        checks.push(BoundCheck::le(
            "constructed superpositions <= t*_n",
            &BigUint::from(built),
            &BigUint::from(counts.t_star),
        ));
    }
    if n >= 3 && n - 1 <= 3 {
        let u = two_layer_count(n, QuasigroupClass::NonSemilinear, jobs)?;
        let t_prev = total_from_reduced(n - 1, classify_census(n - 1, jobs)?.t_star);
        // |U| ≤ 3t²/2ⁿ⁺¹ in integer form
        checks.push(BoundCheck::le(
            "two-layer tables 2^(n+1)*|U_n| <= 3*t_(n-1)^2",
            &(two_pow(n + 1) * &u),
            &(BigUint::from(3u32) * &t_prev * &t_prev),
        ));
        let w = total_from_reduced(n, counts.w_star);
        checks.push(BoundCheck::le(
            "w_n <= 2*|U_n|",
            &w,
            &(BigUint::from(2u32) * u),
        ));
    }
    Ok(checks)
}

/// The number of distinct reduced non-semilinear n-quasigroups of the form
/// h(g(x₁,x₂,x₃),x₄,…,xₙ) with g reduced non-semilinear and h reduced.
/// Fails with a defect if two pairs (g, h) give the same f or some f is
/// semilinear.
pub fn superposition_lower_witnesses(n: usize, jobs: usize) -> Result<u64> {
    if n < 4 {
        return Err(Error::DimensionTooSmall { n, min: 4 });
    }
    if n - 2 > 3 {
        return Err(Error::DimensionTooLarge { n, max: 5 });
    }
    let (threes, _) = collect_reduced(3, jobs)?;
    let three_flags = classify_all(&threes, jobs)?;
    let inner: Vec<&Quasigroup> = threes
        .iter()
        .zip(&three_flags)
        .filter(|(_, f)| !f.semilinear)
        .map(|(g, _)| g)
        .collect();
    let (outer, _) = collect_reduced(n - 2, jobs)?;
    let rest = n - 3;
    let built: Vec<Quasigroup> = inner
        .iter()
        .flat_map(|g| outer.iter().map(move |h| (*g, h)))
        .map(|(g, h)| {
            let table = (0..volume(n))
                .map(|i| {
                    let u = g.at(i >> (2 * rest));
                    h.at(((u as usize) << (2 * rest)) | (i & ((1 << (2 * rest)) - 1)))
                })
                .collect();
            Quasigroup::from_raw(n, table)
        })
        .collect();
    let distinct: std::collections::HashSet<&Quasigroup> = built.iter().collect();
    if distinct.len() != built.len() {
        return Err(Error::defect("two superpositions coincide"));
    }
    let semilinear = pool(jobs)?.install(|| {
        built
            .par_iter()
            .filter(|f| is_semilinear(f).is_some())
            .count()
    });
    if semilinear != 0 || built.iter().any(|f| !f.is_reduced()) {
        return Err(Error::defect(
            "superposition of a non-semilinear quasigroup is semilinear or not reduced",
        ));
    }
    Ok(built.len() as u64)
}

/// Bound records derivable from the counts of one arity plus smaller
/// censuses computed on demand.
pub fn census_bounds(c: &ClassCounts, jobs: usize) -> Result<Vec<BoundCheck>> {
    let n = c.n;
    let big = |x: u64| BigUint::from(x);
    let mut out = vec![
        BoundCheck::eq(
            "semilinear k*_n = 3*2^(2^n-n-1)-2",
            &big(c.k_star),
            &formula_k_star(n)?,
        ),
        BoundCheck::le("k*_n <= v*_n", &big(c.k_star), &big(c.v_star)),
        BoundCheck::le("v*_n <= 2*k*_n", &big(c.v_star), &(big(2) * big(c.k_star))),
    ];
    if n >= 3 {
        let table: Vec<u64> = (1..n).map(published_v_star).collect::<Result<_>>()?;
        out.push(BoundCheck::le(
            "decomposable r*_n <= sum C(n,m) v*_(n-m+1) v*_m",
            &big(c.r_star),
            &bound_r_star(n, &table)?,
        ));
        let prev = classify_census(n - 1, jobs)?;
        let t_prev = total_from_reduced(n - 1, prev.t_star);
        // wₙ ≤ 3t²ₙ₋₁/2ⁿ in integer form
        out.push(BoundCheck::le(
            "2^n*w_n <= 3*t_(n-1)^2",
            &(two_pow(n) * total_from_reduced(n, c.w_star)),
            &(big(3) * &t_prev * &t_prev),
        ));
    }
    if n >= 4 {
        let t3 = classify_census(3, jobs)?.t_star;
        let v_prev2 = published_v_star(n - 2)?;
        out.push(BoundCheck::le(
            "superpositions t*_3*v*_(n-2) <= t*_n",
            &(big(t3) * big(v_prev2)),
            &big(c.t_star),
        ));
    }
    out.extend(sandwich_bounds(n, c.v_star)?);
    Ok(out)
}

fn sandwich_bounds(n: usize, v_star: u64) -> Result<Vec<BoundCheck>> {
    let mut out = Vec::new();
    if n >= 4 {
        let t = verify_count_sandwich(n, v_star)?;
        out.push(BoundCheck::le(
            "lower 3^(n+1)*2^(2^n+1) <= v_n",
            &t.lower,
            &t.v,
        ));
        if t.applicable {
            out.push(BoundCheck::le(
                "upper v_n <= (3^(n+1)+1)*2^(2^n+1)",
                &t.v,
                &t.upper,
            ));
        }
    }
    Ok(out)
}

/// Options of one census run.
#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    pub jobs: usize,
    pub classify: bool,
    pub long_run: bool,
    pub checkpoint: Option<PathBuf>,
    /// Count through equivalence classes of the first layer instead of a
    /// full search; `node_count` then covers one completion search per class.
    pub by_first_layer: bool,
}

/// JSON report of one census run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub v_star: u64,
    pub k_star: Option<u64>,
    pub formula_k_star: String,
    pub r_star: Option<u64>,
    pub t_star: Option<u64>,
    pub w_star: Option<u64>,
    pub bounds: Vec<BoundCheck>,
    pub node_count: u64,
    pub runtime_ms: u64,
}

impl CensusReport {
    pub fn all_bounds_hold(&self) -> bool {
        self.bounds.iter().all(|b| b.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let opt = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
        let mut s = format!(
            "n={} v*={} k*={} formula_k*={} r*={} t*={} w*={}\nnodes={} runtime_ms={}\n",
            self.n,
            self.v_star,
            opt(self.k_star),
            self.formula_k_star,
            opt(self.r_star),
            opt(self.t_star),
            opt(self.w_star),
            self.node_count,
            self.runtime_ms
        );
        for b in &self.bounds {
            s.push_str(&b.to_string());
            s.push('\n');
        }
        s
    }
}

pub fn run_census(n: usize, opts: &CensusOptions) -> Result<CensusReport> {
    check_census_dim(n, opts.long_run)?;
    let started = Instant::now();
    let formula = formula_k_star(n)?.to_string();
    let jobs = opts.jobs.max(1);
    let mut report = if opts.classify {
        if opts.by_first_layer {
            return Err(Error::precondition("classification needs the full search"));
        }
        if n > MAX_CLASSIFY_DIM {
            return Err(Error::DimensionTooLarge {
                n,
                max: MAX_CLASSIFY_DIM,
            });
        }
        let c = classify_census(n, jobs)?;
        CensusReport {
            n,
            v_star: c.v_star,
            k_star: Some(c.k_star),
            formula_k_star: formula,
            r_star: Some(c.r_star),
            t_star: Some(c.t_star),
            w_star: Some(c.w_star),
            bounds: census_bounds(&c, jobs)?,
            node_count: c.nodes,
            runtime_ms: 0,
        }
    } else {
        let stats = match (&opts.checkpoint, opts.by_first_layer) {
            (Some(_), true) => {
                return Err(Error::precondition(
                    "a first-layer count does not take a checkpoint",
                ))
            }
            (None, true) => {
                let c = count_reduced_by_first_layer(n, jobs)?;
                SearchStats {
                    count: c.count,
                    nodes: c.nodes,
                }
            }
            (Some(path), false) => {
                count_reduced_checkpointed(n, jobs, opts.long_run, path, |_, _| {})?
            }
            (None, false) => count_reduced(n, jobs, opts.long_run)?,
        };
        CensusReport {
            n,
            v_star: stats.count,
            k_star: None,
            formula_k_star: formula,
            r_star: None,
            t_star: None,
            w_star: None,
            bounds: sandwich_bounds(n, stats.count)?,
            node_count: stats.nodes,
            runtime_ms: 0,
        }
    };
    report.runtime_ms = started.elapsed().as_millis().to_u64().unwrap_or(u64::MAX);
    Ok(report)
}
