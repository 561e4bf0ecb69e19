use crate::bits::{words_for, Bitset};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::perm::Perm;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const ENUM_BUDGET_LOG2: u32 = 28;
pub const MITM_TABLE_CAP: u128 = 1 << 27;

/// A linear code over a prime field, kept as a reduced row-echelon generator
/// matrix. The GF(2) representation is bit-packed; odd primes use byte rows
/// (they only appear in small cross-checks).
pub struct LinearCode {
    pub p: u32,
    pub n: usize,
    pub k: usize,
    pub rows: GenMatrix,
    pub pivots: Vec<usize>,
}

pub enum GenMatrix {
    Gf2(Vec<Bitset>),
    Gfp(Vec<Vec<u8>>),
}

impl LinearCode {
    pub fn gf2_rows(&self) -> &[Bitset] {
        match &self.rows {
            GenMatrix::Gf2(r) => r,
            GenMatrix::Gfp(_) => panic!("not a binary code"),
        }
    }

    pub fn params(&self) -> (usize, usize) {
        (self.n, self.k)
    }
}

const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

pub fn code_from_matrix(matrix: &[Vec<u8>], p: u32) -> Result<LinearCode> {
    if !PRIMES.contains(&p) {
        return Err(Error::Input(format!("unsupported field GF({})", p)));
    }
    let n = matrix.first().map_or(0, |r| r.len());
    if n == 0 || n > 4096 {
        return Err(Error::Input(format!("code length {} out of range 1..=4096", n)));
    }
    if matrix.iter().any(|r| r.len() != n) {
        return Err(Error::Input("ragged matrix".into()));
    }
    if p == 2 {
        let rows: Vec<Bitset> = matrix
            .iter()
            .map(|r| {
                let mut b = Bitset::new(n);
                for (i, &x) in r.iter().enumerate() {
                    if x % 2 == 1 {
                        b.set(i);
                    }
                }
                b
            })
            .collect();
        code_from_rows_gf2(n, rows)
    } else {
        let rows: Vec<Vec<u8>> = matrix
            .iter()
            .map(|r| r.iter().map(|&x| x % p as u8).collect())
            .collect();
        let (rref, pivots) = rref_gfp(rows, p, n);
        Ok(LinearCode {
            p,
            n,
            k: rref.len(),
            pivots,
            rows: GenMatrix::Gfp(rref),
        })
    }
}

/// The binary code spanned by the adjacency matrix of a graph.
pub fn code_from_adjacency(g: &Graph, p: u32) -> Result<LinearCode> {
    if p == 2 {
        code_from_rows_gf2(g.n, g.rows.clone())
    } else {
        let matrix: Vec<Vec<u8>> = g
            .rows
            .iter()
            .map(|r| (0..g.n).map(|j| r.get(j) as u8).collect())
            .collect();
        code_from_matrix(&matrix, p)
    }
}

pub fn code_from_rows_gf2(n: usize, rows: Vec<Bitset>) -> Result<LinearCode> {
    let (rref, pivots) = rref_gf2(rows, n);
    Ok(LinearCode {
        p: 2,
        n,
        k: rref.len(),
        pivots,
        rows: GenMatrix::Gf2(rref),
    })
}

/// Reduced row echelon form over GF(2); returns (nonzero rows, pivot columns).
pub fn rref_gf2(mut rows: Vec<Bitset>, n: usize) -> (Vec<Bitset>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// RREF over GF(2) with a preferred column order (used to find a second
/// information set disjoint from a given one).
pub fn rref_gf2_cols(mut rows: Vec<Bitset>, col_order: &[usize]) -> (Vec<Bitset>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for &col in col_order {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

fn rref_gfp(mut rows: Vec<Vec<u8>>, p: u32, n: usize) -> (Vec<Vec<u8>>, Vec<usize>) {
    let p = p as u16;
    let inv = |a: u16| -> u16 {
        (1..p).find(|&x| (a * x) % p == 1).unwrap()
    };
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let scale = inv(rows[rank][col] as u16);
        for x in rows[rank].iter_mut() {
            *x = ((*x as u16 * scale) % p) as u8;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col] as u16;
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x = ((*x as u16 + (p - f % p) * pv as u16) % p) as u8;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// Membership in the row space (GF(2)): reduce against the RREF rows.
pub fn contains_gf2(c: &LinearCode, word: &Bitset) -> bool {
    let rows = c.gf2_rows();
    let mut w = word.clone();
    for (row, &piv) in rows.iter().zip(&c.pivots) {
        if w.get(piv) {
            w.xor_assign(row);
        }
    }
    w.is_empty()
}

/// Does the coordinate permutation map codewords to codewords? It is enough
/// to check the generator rows.
pub fn is_code_automorphism(c: &LinearCode, perm: &Perm) -> Result<bool> {
    if perm.degree() != c.n {
        return Err(Error::Input("permutation degree differs from code length".into()));
    }
    match &c.rows {
        GenMatrix::Gf2(rows) => {
            for row in rows {
                let mut img = Bitset::new(c.n);
                for i in row.iter_ones() {
                    img.set(perm.apply(i));
                }
                if !contains_gf2(c, &img) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        GenMatrix::Gfp(_) => Err(Error::Input(
            "automorphism check implemented for GF(2) codes only".into(),
        )),
    }
}

/// Columns of a parity-check matrix derived from the RREF generator
/// (r = n − k bits per column).
pub fn parity_check_columns(c: &LinearCode) -> Vec<Bitset> {
    let rows = c.gf2_rows();
    let r = c.n - c.k;
    let mut is_pivot = vec![usize::MAX; c.n];
    for (i, &p) in c.pivots.iter().enumerate() {
        is_pivot[p] = i;
    }
    let non_pivots: Vec<usize> = (0..c.n).filter(|&q| is_pivot[q] == usize::MAX).collect();
    let mut cols = vec![Bitset::new(r); c.n];
    for (j, &q) in non_pivots.iter().enumerate() {
        cols[q].set(j);
        for (i, row) in rows.iter().enumerate() {
            if row.get(q) {
                cols[c.pivots[i]].set(j);
            }
        }
    }
    cols
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WeightDistribution {
    /// nonzero ⟨weight, count⟩ entries, ascending by weight
    pub entries: Vec<(usize, u64)>,
}

impl WeightDistribution {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c).sum()
    }
}

/// Run `f(prefix_word, low_rows)` over 2^hi seed words in parallel; each task
/// Gray-codes through the low rows. Used by the three exhaustive scans.
fn gf2_scan<T, F, R>(rows: &[Bitset], n: usize, per_task: F, reduce: R) -> T
where
    T: Send,
    F: Fn(Vec<u64>, &[Bitset]) -> T + Sync,
    R: Fn(T, T) -> T + Sync,
    T: Clone,
{
    let k = rows.len();
    let hi = k.min(10);
    let klo = k - hi;
    let (low, high) = rows.split_at(klo);
    (0u32..1 << hi)
        .into_par_iter()
        .map(|prefix| {
            let mut seed = vec![0u64; words_for(n)];
            for (j, row) in high.iter().enumerate() {
                if prefix >> j & 1 != 0 {
                    for (a, b) in seed.iter_mut().zip(row.words()) {
                        *a ^= b;
                    }
                }
            }
            per_task(seed, low)
        })
        .reduce_with(|a, b| reduce(a, b))
        .expect("at least one task")
}

/// Gray-code walk over all subsets of `low` starting from `seed`, calling
/// `visit(word, weight)` for every codeword in the coset.
fn gray_walk<F: FnMut(&[u64], usize)>(mut seed: Vec<u64>, low: &[Bitset], mut visit: F) {
    let weight = |w: &[u64]| -> usize { w.iter().map(|x| x.count_ones() as usize).sum() };
    visit(&seed, weight(&seed));
    let klo = low.len();
    if klo == 0 {
        return;
    }
    let total: u64 = 1u64 << klo;
    for i in 1..total {
        let j = i.trailing_zeros() as usize;
        for (a, b) in seed.iter_mut().zip(low[j].words()) {
            *a ^= b;
        }
        visit(&seed, weight(&seed));
    }
}

/// Exact weight distribution by full enumeration (p^k ≤ 2^28).
pub fn weight_distribution(c: &LinearCode) -> Result<WeightDistribution> {
    if c.k == 0 {
        return Ok(WeightDistribution { entries: vec![(0, 1)] });
    }
    check_enum_budget(c)?;
    let counts: Vec<u64> = match &c.rows {
        GenMatrix::Gf2(rows) => gf2_scan(
            rows,
            c.n,
            |seed, low| {
                let mut counts = vec![0u64; c.n + 1];
                gray_walk(seed, low, |_, w| counts[w] += 1);
                counts
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                a
            },
        ),
        GenMatrix::Gfp(rows) => {
            let mut counts = vec![0u64; c.n + 1];
            for_each_gfp_word(rows, c.p, |word| {
                let w = word.iter().filter(|&&x| x != 0).count();
                counts[w] += 1;
            });
            counts
        }
    };
    Ok(WeightDistribution {
        entries: counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(w, c)| (w, c))
            .collect(),
    })
}

fn check_enum_budget(c: &LinearCode) -> Result<()> {
    let size = (c.p as f64).powi(c.k as i32);
    if size > (1u64 << ENUM_BUDGET_LOG2) as f64 {
        return Err(Error::Resource(format!(
            "{}^{} codewords exceed the enumeration budget 2^{}; use min_distance instead",
            c.p, c.k, ENUM_BUDGET_LOG2
        )));
    }
    Ok(())
}

fn for_each_gfp_word<F: FnMut(&[u8])>(rows: &[Vec<u8>], p: u32, mut f: F) {
    let k = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let p8 = p as u16;
    let mut digits = vec![0u8; k];
    let mut word = vec![0u8; n];
    loop {
        f(&word);
        // odometer
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            digits[i] += 1;
            for (w, &r) in word.iter_mut().zip(&rows[i]) {
                *w = ((*w as u16 + r as u16) % p8) as u8;
            }
            if digits[i] < p as u8 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// All weight-w codewords of a binary code, as support bitsets, sorted for
/// determinism.
pub fn words_of_weight(c: &LinearCode, w: usize) -> Result<Vec<Bitset>> {
    check_enum_budget(c)?;
    let rows = c.gf2_rows();
    if c.k == 0 {
        return Ok(if w == 0 { vec![Bitset::new(c.n)] } else { vec![] });
    }
    let n = c.n;
    let mut found = gf2_scan(
        rows,
        n,
        |seed, low| {
            let mut out: Vec<Bitset> = Vec::new();
            gray_walk(seed, low, |word, wt| {
                if wt == w {
                    out.push(Bitset::from_words(n, word.to_vec()));
                }
            });
            out
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    );
    found.sort_unstable();
    Ok(found)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Enumerate,
    Mitm,
}

#[derive(Clone, Debug)]
pub enum DistanceResult {
    Exact { d: usize, witness: Bitset },
    /// No certificate within budget: d lies in [lower, upper]; the witness,
    /// if present, attains the upper bound.
    Interval { lower: usize, upper: usize, witness: Option<Bitset> },
}

impl DistanceResult {
    pub fn exact(&self) -> Option<usize> {
        match self {
            DistanceResult::Exact { d, .. } => Some(*d),
            _ => None,
        }
    }
}

pub fn min_distance(c: &LinearCode, strategy: Strategy, w_max: usize) -> Result<DistanceResult> {
    if c.k == 0 {
        return Err(Error::Input("dimension-0 code has no minimum distance".into()));
    }
    if c.p != 2 {
        check_enum_budget(c)?;
        return Ok(enumerate_min_gfp(c));
    }
    let can_enumerate = c.k as u32 <= ENUM_BUDGET_LOG2;
    match strategy {
        Strategy::Enumerate => {
            check_enum_budget(c)?;
            Ok(enumerate_min_gf2(c))
        }
        Strategy::Auto if can_enumerate => Ok(enumerate_min_gf2(c)),
        _ => mitm_min_distance(c, w_max),
    }
}

fn enumerate_min_gf2(c: &LinearCode) -> DistanceResult {
    let rows = c.gf2_rows();
    let n = c.n;
    let best = gf2_scan(
        rows,
        n,
        |seed, low| {
            let mut best: Option<(usize, Vec<u64>)> = None;
            gray_walk(seed, low, |word, wt| {
                if wt > 0 && best.as_ref().map_or(true, |(bw, bv)| (wt, word) < (*bw, &bv[..])) {
                    best = Some((wt, word.to_vec()));
                }
            });
            best
        },
        |a, b| match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(if (a.0, &a.1) <= (b.0, &b.1) { a } else { b }),
        },
    )
    .expect("k ≥ 1 gives a nonzero word");
    DistanceResult::Exact {
        d: best.0,
        witness: Bitset::from_words(c.n, best.1),
    }
}

fn enumerate_min_gfp(c: &LinearCode) -> DistanceResult {
    let GenMatrix::Gfp(rows) = &c.rows else { unreachable!() };
    let mut best: Option<(usize, Bitset)> = None;
    for_each_gfp_word(rows, c.p, |word| {
        let wt = word.iter().filter(|&&x| x != 0).count();
        if wt > 0 && best.as_ref().map_or(true, |(bw, _)| wt < *bw) {
            let mut b = Bitset::new(c.n);
            for (i, &x) in word.iter().enumerate() {
                if x != 0 {
                    b.set(i);
                }
            }
            best = Some((wt, b));
        }
    });
    let (d, witness) = best.expect("k ≥ 1");
    DistanceResult::Exact { d, witness }
}

/// Meet-in-the-middle search for the smallest column dependency of a parity
/// check matrix, m ascending. When the ⌊m/2⌋-subset table would exceed the
/// memory cap, falls back to a certified interval: the verified lower bound
/// plus an upper bound from low-information-weight enumeration over two
/// disjoint information sets.
fn mitm_min_distance(c: &LinearCode, w_max: usize) -> Result<DistanceResult> {
    let cols = parity_check_columns(c);
    let n = c.n;
    for m in 1..=w_max {
        let a = m / 2;
        let b = m - a;
        let table_size = crate::action::binomial(n, a).unwrap_or(u128::MAX);
        let probe_size = crate::action::binomial(n, b).unwrap_or(u128::MAX);
        // an enumerable code whose next round costs more than the 2^k
        // message-space scan: scan instead (same exact answer, cheaper)
        if c.k as u32 <= ENUM_BUDGET_LOG2
            && table_size.saturating_add(probe_size)
                > (1u128 << c.k.min(127)).max(1 << 16)
        {
            return Ok(enumerate_min_gf2(c));
        }
        if table_size > MITM_TABLE_CAP || a > MITM_MAX_HALF {
            // everything below m is already excluded; for low-dimensional
            // codes a full message-space scan is cheaper than deeper rounds
            // and stays exact
            if c.k as u32 <= ENUM_BUDGET_LOG2 {
                return Ok(enumerate_min_gf2(c));
            }
            return Ok(fallback_interval(c, m));
        }
        if let Some(witness) = mitm_round(c, &cols, m) {
            debug_assert!(contains_gf2(c, &witness));
            return Ok(DistanceResult::Exact { d: m, witness });
        }
    }
    Ok(DistanceResult::Interval {
        lower: w_max + 1,
        upper: n,
        witness: None,
    })
}

const MITM_MAX_HALF: usize = 6;

fn fallback_interval(c: &LinearCode, lower: usize) -> DistanceResult {
    match low_info_weight_min(c) {
        Some((upper, witness)) if upper == lower => DistanceResult::Exact { d: lower, witness },
        Some((upper, witness)) => DistanceResult::Interval {
            lower,
            upper,
            witness: Some(witness),
        },
        None => DistanceResult::Interval { lower, upper: c.n, witness: None },
    }
}

/// Is there a set of m columns of H summing to zero? Table the ⌊m/2⌋-subset
/// sums, probe the ⌈m/2⌉-subsets; returns the lexicographically least witness
/// support found, as a codeword. The probe side keeps an incremental XOR and
/// a bitmap prefilter so the hot loop is allocation- and hash-map-free.
fn mitm_round(c: &LinearCode, cols: &[Bitset], m: usize) -> Option<Bitset> {
    let n = c.n;
    let a = m / 2;
    let b = m - a;
    let key_of = |bits: &Bitset| -> u64 {
        let mut h = 0x9e3779b97f4a7c15u64;
        for &w in bits.words() {
            h = mix(h, w);
        }
        h
    };

    // table of a-subsets, sorted by key for binary search
    let mut table: Vec<(u64, [u16; MITM_MAX_HALF])> = Vec::new();
    let mut idx = vec![0usize; a];
    enumerate_subsets(n, a, &mut idx, 0, 0, &mut |sel: &[usize]| {
        let mut sum = Bitset::new(cols[0].len());
        for &i in sel {
            sum.xor_assign(&cols[i]);
        }
        let mut packed = [u16::MAX; MITM_MAX_HALF];
        for (s, &i) in packed.iter_mut().zip(sel) {
            *s = i as u16;
        }
        table.push((key_of(&sum), packed));
    });
    table.sort_unstable();

    // bitmap over the low 28 key bits: one cache line decides most probes
    const FILTER_BITS: usize = 28;
    let mut filter = vec![0u64; 1 << (FILTER_BITS - 6)];
    for &(key, _) in &table {
        let i = (key & ((1 << FILTER_BITS) - 1)) as usize;
        filter[i >> 6] |= 1u64 << (i & 63);
    }

    let check_key = |sum: &Bitset, sel: &[usize], best: &mut Option<Vec<usize>>| {
        let key = key_of(sum);
        let i = (key & ((1 << FILTER_BITS) - 1)) as usize;
        if filter[i >> 6] >> (i & 63) & 1 == 0 {
            return;
        }
        let start = table.partition_point(|&(k, _)| k < key);
        for &(k, packed) in &table[start..] {
            if k != key {
                break;
            }
            let aset = &packed[..a];
            if aset.iter().any(|&i| sel.contains(&(i as usize))) {
                continue;
            }
            // verify the sum exactly (keys are only hashes)
            let mut chk = sum.clone();
            for &i in aset {
                chk.xor_assign(&cols[i as usize]);
            }
            if !chk.is_empty() {
                continue;
            }
            let mut support: Vec<usize> =
                sel.iter().copied().chain(aset.iter().map(|&i| i as usize)).collect();
            support.sort_unstable();
            if best.as_ref().map_or(true, |b| &support < b) {
                *best = Some(support);
            }
        }
    };

    fn probe_rec(
        cols: &[Bitset],
        sel: &mut Vec<usize>,
        sum: &mut Bitset,
        start: usize,
        remaining: usize,
        visit: &mut impl FnMut(&Bitset, &[usize]),
    ) {
        if remaining == 0 {
            visit(sum, sel);
            return;
        }
        for i in start..cols.len() - remaining + 1 {
            sel.push(i);
            sum.xor_assign(&cols[i]);
            probe_rec(cols, sel, sum, i + 1, remaining - 1, visit);
            sum.xor_assign(&cols[i]);
            sel.pop();
        }
    }

    // probe b-subsets in parallel (split on the first element), keep the
    // least witness for determinism
    let hit = (0..n)
        .into_par_iter()
        .filter_map(|first| {
            let mut best: Option<Vec<usize>> = None;
            let mut sel = vec![first];
            let mut sum = cols[first].clone();
            if b == 1 {
                check_key(&sum, &sel, &mut best);
            } else if n - first >= b {
                probe_rec(cols, &mut sel, &mut sum, first + 1, b - 1, &mut |s, ss| {
                    check_key(s, ss, &mut best)
                });
            }
            best
        })
        .min();
    hit.map(|support| {
        let mut w = Bitset::new(n);
        for i in support {
            w.set(i);
        }
        w
    })
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    idx: &mut [usize],
    depth: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(&idx[..k]);
        return;
    }
    for i in start..n {
        idx[depth] = i;
        enumerate_subsets(n, k, idx, depth + 1, i + 1, f);
    }
}

/// Minimum weight over codewords with at most 4 information bits in one of
/// two disjoint information sets. Any codeword of weight ≤ 8 has ≤ 4 support
/// positions in one of the sets, so this certifies small upper bounds.
fn low_info_weight_min(c: &LinearCode) -> Option<(usize, Bitset)> {
    let rows1 = c.gf2_rows().to_vec();
    // second information set preferring columns outside the first
    let in_i1: std::collections::HashSet<usize> = c.pivots.iter().copied().collect();
    let mut order: Vec<usize> = (0..c.n).filter(|q| !in_i1.contains(q)).collect();
    order.extend((0..c.n).filter(|q| in_i1.contains(q)));
    let (rows2, pivots2) = rref_gf2_cols(rows1.clone(), &order);
    let disjoint = pivots2.iter().all(|p| !in_i1.contains(p));

    let max_t = 4usize;
    let mut best: Option<(usize, Bitset)> = None;
    let mut consider = |rows: &[Bitset]| {
        let found: Option<(usize, Vec<u64>)> = (0..rows.len())
            .into_par_iter()
            .filter_map(|first| {
                let mut local: Option<(usize, Vec<u64>)> = None;
                let mut track = |word: &Bitset| {
                    let wt = word.count_ones();
                    if local
                        .as_ref()
                        .map_or(true, |(bw, bv)| (wt, word.words()) < (*bw, &bv[..]))
                    {
                        local = Some((wt, word.words().to_vec()));
                    }
                };
                let base = rows[first].clone();
                track(&base);
                let idx = vec![0usize; max_t - 1];
                // up to max_t-1 further rows
                for extra in 1..max_t {
                    enumerate_subsets(
                        rows.len() - first - 1,
                        extra,
                        &mut idx[..extra].to_vec(),
                        0,
                        0,
                        &mut |sel| {
                            let mut w = base.clone();
                            for &off in sel {
                                w.xor_assign(&rows[first + 1 + off]);
                            }
                            track(&w);
                        },
                    );
                }
                local
            })
            .min();
        if let Some((wt, words)) = found {
            let bs = Bitset::from_words(c.n, words);
            if best.as_ref().map_or(true, |(bw, _)| wt < *bw) {
                best = Some((wt, bs));
            }
        }
    };
    consider(&rows1);
    if disjoint {
        // with two disjoint information sets, any codeword of weight ≤ 2·max_t
        // has ≤ max_t information bits in one of them, so the minimum found is
        // conclusive whenever it matches the verified lower bound
        consider(&rows2);
    }
    best
}

/// Hamming weight and 1-based support of a word.
pub fn hamming_weight(x: &Bitset) -> usize {
    x.count_ones()
}

pub fn support_1based(x: &Bitset) -> Vec<usize> {
    x.iter_ones().map(|i| i + 1).collect()
}

/// Do the given columns form an information set (projection is onto)?
pub fn is_information_set(c: &LinearCode, cols: &[usize]) -> bool {
    if cols.len() != c.k {
        return false;
    }
    match &c.rows {
        GenMatrix::Gf2(rows) => {
            // restrict the generator to the columns and take the rank
            let sub: Vec<Bitset> = rows
                .iter()
                .map(|r| {
                    let mut b = Bitset::new(cols.len());
                    for (j, &col) in cols.iter().enumerate() {
                        if r.get(col) {
                            b.set(j);
                        }
                    }
                    b
                })
                .collect();
            let (rref, _) = rref_gf2(sub, cols.len());
            rref.len() == c.k
        }
        GenMatrix::Gfp(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn hamming74() -> LinearCode {
        code_from_matrix(
            &[
                vec![1, 0, 0, 0, 0, 1, 1],
                vec![0, 1, 0, 0, 1, 0, 1],
                vec![0, 0, 1, 0, 1, 1, 0],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
            2,
        )
        .unwrap()
    }

    #[test]
    fn hamming_weight_distribution() {
        let c = hamming74();
        assert_eq!((c.n, c.k), (7, 4));
        let wd = weight_distribution(&c).unwrap();
        assert_eq!(wd.entries, vec![(0, 1), (3, 7), (4, 7), (7, 1)]);
        assert_eq!(wd.total(), 16);
        assert_eq!(words_of_weight(&c, 3).unwrap().len(), 7);
    }

    #[test]
    fn min_distance_strategies_agree() {
        let c = hamming74();
        assert_eq!(min_distance(&c, Strategy::Enumerate, c.n).unwrap().exact(), Some(3));
        assert_eq!(min_distance(&c, Strategy::Mitm, c.n).unwrap().exact(), Some(3));
        match min_distance(&c, Strategy::Auto, c.n).unwrap() {
            DistanceResult::Exact { d, witness } => {
                assert_eq!(d, 3);
                assert_eq!(hamming_weight(&witness), 3);
                assert!(contains_gf2(&c, &witness));
            }
            other => panic!("expected exact, got {:?}", other),
        }
    }

    #[test]
    fn mitm_matches_enumeration_on_random_codes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..12 {
            let n = 12 + (trial % 5) * 3;
            let k = 4 + trial % 6;
            let matrix: Vec<Vec<u8>> = (0..k)
                .map(|_| (0..n).map(|_| rng.gen_range(0..2u8)).collect())
                .collect();
            let c = match code_from_matrix(&matrix, 2) {
                Ok(c) if c.k > 0 => c,
                _ => continue,
            };
            let e = min_distance(&c, Strategy::Enumerate, c.n).unwrap().exact().unwrap();
            let m = min_distance(&c, Strategy::Mitm, c.n).unwrap().exact().unwrap();
            assert_eq!(e, m, "trial {} ({} x {})", trial, k, n);
        }
    }

    #[test]
    fn parity_check_is_orthogonal_to_the_code() {
        let c = hamming74();
        let h = parity_check_columns(&c);
        assert_eq!(h.len(), c.n);
        for row in c.gf2_rows() {
            // syndrome of every generator row is zero
            let mut synd = 0u64;
            for (j, col) in h.iter().enumerate() {
                if row.get(j) {
                    synd ^= col.words()[0];
                }
            }
            assert_eq!(synd, 0);
        }
        let mut outside = Bitset::new(7);
        outside.set(0);
        assert!(!contains_gf2(&c, &outside));
    }

    #[test]
    fn ternary_codes() {
        // tetracode [4,2,3] over GF(3)
        let c = code_from_matrix(&[vec![1, 0, 1, 1], vec![0, 1, 1, 2]], 3).unwrap();
        assert_eq!((c.n, c.k), (4, 2));
        let wd = weight_distribution(&c).unwrap();
        assert_eq!(wd.entries, vec![(0, 1), (3, 8)]);
        assert_eq!(min_distance(&c, Strategy::Enumerate, 4).unwrap().exact(), Some(3));
    }

    #[test]
    fn information_sets_and_automorphisms() {
        let c = hamming74();
        assert!(is_information_set(&c, &c.pivots.clone()));
        // the codeword with support {0,5,6} vanishes on {1,2,3,4}
        assert!(!is_information_set(&c, &[1, 2, 3, 4]));
        let id = crate::perm::Perm::identity(7);
        assert!(is_code_automorphism(&c, &id).unwrap());
        let swap01 = crate::perm::Perm::from_images(vec![1, 0, 2, 3, 4, 5, 6]).unwrap();
        assert!(!is_code_automorphism(&c, &swap01).unwrap());
    }
}
