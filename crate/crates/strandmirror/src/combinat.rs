//! Index combinatorics: close subsets, canonical interval partitions, the
//! triple-overlap set, the simplicial complex `X(n,k)` of size-`n` subsets,
//! and the integer grading solver.
//!
//! Two size-`n` subsets `S, S' ⊆ [0,k]` are *close* when some bijection
//! `g : S → S'` moves every element by at most one.  Close pairs carry a
//! unique partition into disjoint "up" intervals (`S` occupies `[i,j−1]`,
//! `S'` occupies `[i+1,j]`), "down" intervals (the reverse), and a common
//! fixed part.  Everything downstream — morphism spaces, their distinguished
//! generators, the composition rule — is phrased in terms of this partition.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::exactlinalg::{homology_z, solve_integer_system, SparseMatrix};
use crate::{Error, Result};

/// A size-`n` subset of `[0,k]`, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubsetLabel {
    k: u8,
    elems: Vec<u8>,
}

impl SubsetLabel {
    pub fn new(k: u8, elems: Vec<u8>) -> Result<SubsetLabel> {
        if elems.is_empty() || elems.len() > k as usize + 1 {
            return Err(Error::InvalidInput(format!(
                "subset size {} out of range for k={k}",
                elems.len()
            )));
        }
        if !elems.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("subset not strictly increasing".into()));
        }
        if *elems.last().unwrap() > k {
            return Err(Error::InvalidInput(format!("element beyond [0,{k}]")));
        }
        Ok(SubsetLabel { k, elems })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: u8) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn elems(&self) -> &[u8] {
        &self.elems
    }

    /// All size-`n` subsets of `[0,k]` in lexicographic order.
    pub fn all(n: usize, k: u8) -> Vec<SubsetLabel> {
        fn rec(start: u8, n: usize, k: u8, cur: &mut Vec<u8>, out: &mut Vec<SubsetLabel>) {
            if cur.len() == n {
                out.push(SubsetLabel { k, elems: cur.clone() });
                return;
            }
            for x in start..=k {
                cur.push(x);
                rec(x + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut out);
        out
    }

    /// Complement inside `[0,k]`, increasing.
    pub fn complement(&self) -> Vec<u8> {
        (0..=self.k).filter(|x| !self.contains(*x)).collect()
    }

    /// Maximal runs of consecutive elements, as intervals.
    pub fn runs(&self) -> Vec<IntervalLabel> {
        let mut out = Vec::new();
        let mut i = 0usize;
        while i < self.elems.len() {
            let lo = self.elems[i];
            let mut hi = lo;
            while i + 1 < self.elems.len() && self.elems[i + 1] == hi + 1 {
                i += 1;
                hi += 1;
            }
            out.push(IntervalLabel::Range { lo, hi });
            i += 1;
        }
        out
    }
}

impl fmt::Display for SubsetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A closed integer interval `[lo, hi]`, or the distinguished empty value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IntervalLabel {
    Empty,
    Range { lo: u8, hi: u8 },
}

impl IntervalLabel {
    pub fn range(lo: u8, hi: u8) -> Result<IntervalLabel> {
        if lo > hi {
            return Err(Error::InvalidInput(format!("interval [{lo},{hi}] has lo > hi")));
        }
        Ok(IntervalLabel::Range { lo, hi })
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, IntervalLabel::Empty)
    }

    pub fn bounds(&self) -> Option<(u8, u8)> {
        match self {
            IntervalLabel::Empty => None,
            IntervalLabel::Range { lo, hi } => Some((*lo, *hi)),
        }
    }

    pub fn contains(&self, x: u8) -> bool {
        match self {
            IntervalLabel::Empty => false,
            IntervalLabel::Range { lo, hi } => *lo <= x && x <= *hi,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            IntervalLabel::Empty => 0,
            IntervalLabel::Range { lo, hi } => (*hi - *lo) as usize + 1,
        }
    }

    pub fn intersect(&self, other: &IntervalLabel) -> IntervalLabel {
        match (self.bounds(), other.bounds()) {
            (Some((a, b)), Some((c, d))) => {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    IntervalLabel::Range { lo, hi }
                } else {
                    IntervalLabel::Empty
                }
            }
            _ => IntervalLabel::Empty,
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = u8>> {
        match self {
            IntervalLabel::Empty => Box::new(std::iter::empty()),
            IntervalLabel::Range { lo, hi } => Box::new(*lo..=*hi),
        }
    }
}

impl fmt::Display for IntervalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalLabel::Empty => write!(f, "∅"),
            IntervalLabel::Range { lo, hi } => {
                if lo == hi {
                    write!(f, "[{lo}]")
                } else {
                    write!(f, "[{lo},{hi}]")
                }
            }
        }
    }
}

/// The canonical partition of a close pair: disjoint up intervals `I_a`,
/// down intervals `J_b`, and the common fixed part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosePartition {
    pub up_intervals: Vec<IntervalLabel>,
    pub down_intervals: Vec<IntervalLabel>,
    pub fixed: Vec<u8>,
}

/// A bijection `g : S → S'` with `g(i) ∈ {i−1, i, i+1}`, stored as the list
/// of images against `S`'s elements in increasing order.
pub type CloseBijection = Vec<u8>;

/// Whether `S` and `S'` admit a bijection moving each element by at most one.
pub fn is_close(s: &SubsetLabel, s2: &SubsetLabel) -> Result<bool> {
    Ok(close_partition_impl(s, s2)?.is_some())
}

/// All bijections `g : S → S'` with `g(i) ∈ {i−1,i,i+1}`, by backtracking.
///
/// Complete and duplicate-free; empty iff the pair is not close.  This is
/// the brute-force oracle behind [`is_close`] and [`close_partition`].
pub fn enumerate_bijections(s: &SubsetLabel, s2: &SubsetLabel) -> Result<Vec<CloseBijection>> {
    if s.len() != s2.len() || s.k() != s2.k() {
        return Err(Error::InvalidInput("subsets must share size and k".into()));
    }
    fn rec(
        i: usize,
        s: &[u8],
        t: &[u8],
        used: &mut [bool],
        img: &mut Vec<u8>,
        out: &mut Vec<CloseBijection>,
    ) {
        if i == s.len() {
            out.push(img.clone());
            return;
        }
        for (j, &tj) in t.iter().enumerate() {
            if used[j] || tj + 1 < s[i] || tj > s[i] + 1 {
                continue;
            }
            used[j] = true;
            img.push(tj);
            rec(i + 1, s, t, used, img, out);
            img.pop();
            used[j] = false;
        }
    }
    let mut out = Vec::new();
    rec(0, s.elems(), s2.elems(), &mut vec![false; s2.len()], &mut Vec::new(), &mut out);
    Ok(out)
}

/// The unique up/down interval partition of a close pair.
pub fn close_partition(s: &SubsetLabel, s2: &SubsetLabel) -> Result<ClosePartition> {
    close_partition_impl(s, s2)?.ok_or(Error::NotClose)
}

/// Prefix-count criterion: with `δ(i) = #(S∩[0,i]) − #(S'∩[0,i])`, the pair
/// is close iff `δ` stays within `{−1,0,1}` and each maximal nonzero run
/// covers a full consecutive block of both subsets; the runs are exactly the
/// up (δ = +1) and down (δ = −1) intervals.
fn close_partition_impl(s: &SubsetLabel, s2: &SubsetLabel) -> Result<Option<ClosePartition>> {
    if s.len() != s2.len() || s.k() != s2.k() {
        return Err(Error::InvalidInput("subsets must share size and k".into()));
    }
    let k = s.k();
    let mut delta = Vec::with_capacity(k as usize + 1);
    let mut d: i32 = 0;
    for i in 0..=k {
        d += i32::from(s.contains(i)) - i32::from(s2.contains(i));
        if d.abs() > 1 {
            return Ok(None);
        }
        delta.push(d);
    }
    if *delta.last().unwrap() != 0 {
        return Ok(None); // sizes differ (cannot happen after the len check)
    }
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    let mut i = 0u8;
    while i <= k {
        if delta[i as usize] == 0 {
            i += 1;
            continue;
        }
        let sign = delta[i as usize];
        let start = i;
        let mut end = i;
        while end < k && delta[end as usize + 1] == sign {
            end += 1;
        }
        if end >= k {
            return Ok(None);
        }
        let hi = end + 1; // δ returns to zero at hi
        let (a, b) = if sign > 0 { (s, s2) } else { (s2, s) };
        // up interval [start,hi]: a ∩ = [start,hi−1], b ∩ = [start+1,hi]
        let full_low = (start..hi).all(|x| a.contains(x)) && !a.contains(hi);
        let full_high = (start + 1..=hi).all(|x| b.contains(x)) && !b.contains(start);
        if !(full_low && full_high) {
            return Ok(None);
        }
        let interval = IntervalLabel::Range { lo: start, hi };
        if sign > 0 {
            ups.push(interval);
        } else {
            downs.push(interval);
        }
        i = hi + 1;
    }
    let covered =
        |x: u8| ups.iter().chain(downs.iter()).any(|iv: &IntervalLabel| iv.contains(x));
    let fixed: Vec<u8> = s.elems().iter().copied().filter(|&x| !covered(x)).collect();
    for &x in &fixed {
        if !s2.contains(x) {
            return Ok(None);
        }
    }
    Ok(Some(ClosePartition { up_intervals: ups, down_intervals: downs, fixed }))
}

/// Variable indices `i` such that `[i−1, i]` lies inside a single overlap
/// piece of the two partitions.  The pieces are the pairwise intersections
/// `I_a ∩ J'_{b'}` and `I'_{a'} ∩ J_b`, with unprimed intervals from
/// `(S,S')` and primed ones from `(S',S'')`.  Containment is checked piece
/// by piece: two touching pieces do not merge.
pub fn triple_overlap(
    s: &SubsetLabel,
    s2: &SubsetLabel,
    s3: &SubsetLabel,
) -> Result<BTreeSet<u8>> {
    let first = close_partition(s, s2)?;
    let second = close_partition(s2, s3)?;
    let mut pieces: Vec<IntervalLabel> = Vec::new();
    for i in &first.up_intervals {
        for j in &second.down_intervals {
            pieces.push(i.intersect(j));
        }
    }
    for i in &second.up_intervals {
        for j in &first.down_intervals {
            pieces.push(i.intersect(j));
        }
    }
    let mut vars = BTreeSet::new();
    for v in 1..=s.k() {
        if pieces.iter().any(|p| p.contains(v - 1) && p.contains(v)) {
            vars.insert(v);
        }
    }
    Ok(vars)
}

/// The simplicial complex with size-`n` subsets as vertices, close pairs as
/// edges, and pairwise-close triples as triangles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexX {
    pub n: usize,
    pub k: u8,
    pub vertices: Vec<SubsetLabel>,
    /// index pairs (i < j) into `vertices`
    pub edges: Vec<(usize, usize)>,
    /// index triples (i < j < l) into `vertices`
    pub triangles: Vec<(usize, usize, usize)>,
}

pub fn build_complex_x(n: usize, k: u8) -> Result<ComplexX> {
    if n == 0 || n > k as usize + 1 {
        return Err(Error::InvalidInput(format!("need 1 ≤ n ≤ k+1, got n={n}, k={k}")));
    }
    let vertices = SubsetLabel::all(n, k);
    let m = vertices.len();
    let mut adj = vec![vec![false; m]; m];
    let mut edges = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            if is_close(&vertices[i], &vertices[j])? {
                adj[i][j] = true;
                adj[j][i] = true;
                edges.push((i, j));
            }
        }
    }
    let mut triangles = Vec::new();
    for &(i, j) in &edges {
        for l in (j + 1)..m {
            if adj[i][l] && adj[j][l] {
                triangles.push((i, j, l));
            }
        }
    }
    Ok(ComplexX { n, k, vertices, edges, triangles })
}

impl ComplexX {
    pub fn vertex_index(&self, s: &SubsetLabel) -> Option<usize> {
        self.vertices.binary_search(s).ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let m = self.vertices.len();
        let mut adj = vec![vec![false; m]; m];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        adj
    }
}

/// First homology data of `X`: Betti number and torsion invariants.
///
/// Grading uniqueness needs `H^1(X; D) = 0` for every abelian group `D`,
/// which holds exactly when `H_1(X; ℤ)` vanishes — free rank and torsion
/// both.  Computed from simplicial boundary maps via Smith normal form.
pub fn h1_of_x(x: &ComplexX) -> Result<(usize, Vec<BigInt>)> {
    let ne = x.edges.len();
    let nt = x.triangles.len();
    let edge_index: BTreeMap<(usize, usize), usize> =
        x.edges.iter().copied().enumerate().map(|(i, e)| (e, i)).collect();
    let mut d1 = SparseMatrix::zero(x.vertices.len(), ne);
    for (e, &(a, b)) in x.edges.iter().enumerate() {
        d1.set(a, e, BigInt::from(-1));
        d1.set(b, e, BigInt::from(1));
    }
    let mut d2 = SparseMatrix::zero(ne, nt);
    for (t, &(a, b, c)) in x.triangles.iter().enumerate() {
        d2.set(edge_index[&(b, c)], t, BigInt::from(1));
        d2.set(edge_index[&(a, c)], t, BigInt::from(-1));
        d2.set(edge_index[&(a, b)], t, BigInt::from(1));
    }
    homology_z(&d2, &d1)
}

/// An integer grading: degrees for the variables and for every ordered close
/// pair, satisfying on every pairwise-close ordered triple
/// `d(S,S') + d(S',S'') = Σ_{i ∈ T(S,S',S'')} d_i + d(S,S'')`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradingSolution {
    pub n: usize,
    pub k: u8,
    pub d_vars: Vec<i64>,
    pub d_pairs: BTreeMap<(SubsetLabel, SubsetLabel), i64>,
}

impl GradingSolution {
    /// Degree shift of the pair `(S, S')`; `Some(0)` on the diagonal.
    pub fn pair_degree(&self, s: &SubsetLabel, s2: &SubsetLabel) -> Option<i64> {
        if s == s2 {
            return Some(0);
        }
        self.d_pairs.get(&(s.clone(), s2.clone())).copied()
    }
}

fn overlap_degree(d_vars: &[i64], t: &BTreeSet<u8>) -> i64 {
    t.iter().map(|&i| d_vars[i as usize - 1]).sum()
}

/// Solves the pair-degree cocycle system on `X(n,k)` for given variable
/// degrees.
///
/// Normalization: pair degrees vanish along a breadth-first spanning tree
/// rooted at the lexicographically smallest vertex, matching the convention
/// that the crossingless distinguished generators sit in degree zero.
/// Propagates through triangles; any edges the propagation cannot reach go
/// to an exact integer solve.  Inconsistency is a hard failure.
pub fn solve_grading(n: usize, k: u8, d_vars: &[i64]) -> Result<GradingSolution> {
    if d_vars.len() != k as usize {
        return Err(Error::InvalidInput(format!("expected {k} variable degrees")));
    }
    let x = build_complex_x(n, k)?;
    let m = x.vertices.len();
    let adj = x.adjacency();

    let mut d: BTreeMap<(usize, usize), i64> = BTreeMap::new();

    // d(b,a) = Σ_{T(a,b,a)} d_i − d(a,b)
    let reverse_sum = |a: usize, b: usize| -> Result<i64> {
        let t = triple_overlap(&x.vertices[a], &x.vertices[b], &x.vertices[a])?;
        Ok(overlap_degree(d_vars, &t))
    };

    let mut seen = vec![false; m];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for w in 0..m {
            if adj[v][w] && !seen[w] {
                seen[w] = true;
                d.insert((v, w), 0);
                d.insert((w, v), reverse_sum(v, w)?);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::GradingInconsistent("X(n,k) is not connected".into()));
    }

    // triangle propagation: d(a,c) = d(a,b) + d(b,c) − Σ_{T(a,b,c)} d_i
    let mut undetermined: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(a, b) in &x.edges {
        if !d.contains_key(&(a, b)) {
            undetermined.insert((a, b));
            undetermined.insert((b, a));
        }
    }
    loop {
        let mut progressed = false;
        for (a, c) in undetermined.iter().copied().collect::<Vec<_>>() {
            if d.contains_key(&(a, c)) {
                undetermined.remove(&(a, c));
                continue;
            }
            let mut found = None;
            for b in 0..m {
                if b != a && b != c && adj[a][b] && adj[b][c] {
                    if let (Some(&dab), Some(&dbc)) = (d.get(&(a, b)), d.get(&(b, c))) {
                        found = Some((b, dab, dbc));
                        break;
                    }
                }
            }
            if let Some((b, dab, dbc)) = found {
                let t = triple_overlap(&x.vertices[a], &x.vertices[b], &x.vertices[c])?;
                let val = dab + dbc - overlap_degree(d_vars, &t);
                d.insert((a, c), val);
                if !d.contains_key(&(c, a)) {
                    d.insert((c, a), reverse_sum(a, c)? - val);
                }
                undetermined.remove(&(a, c));
                undetermined.remove(&(c, a));
                progressed = true;
            }
        }
        if undetermined.is_empty() {
            break;
        }
        if !progressed {
            solve_residual(&x, d_vars, &mut d, &mut undetermined)?;
            break;
        }
    }

    let mut d_pairs = BTreeMap::new();
    for ((a, b), v) in &d {
        d_pairs.insert((x.vertices[*a].clone(), x.vertices[*b].clone()), *v);
    }
    let sol = GradingSolution { n, k, d_vars: d_vars.to_vec(), d_pairs };
    verify_grading(&x, d_vars, &sol)?;
    Ok(sol)
}

/// Exact integer solve for ordered edges that triangle propagation missed.
fn solve_residual(
    x: &ComplexX,
    d_vars: &[i64],
    d: &mut BTreeMap<(usize, usize), i64>,
    undetermined: &mut BTreeSet<(usize, usize)>,
) -> Result<()> {
    let unknowns: Vec<(usize, usize)> = undetermined.iter().copied().collect();
    let idx: BTreeMap<(usize, usize), usize> =
        unknowns.iter().copied().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rows: Vec<(BTreeMap<usize, i64>, i64)> = Vec::new();
    // reversal relations d(a,b) + d(b,a) = Σ_{T(a,b,a)} d_i for unknown pairs
    for &(a, b) in &unknowns {
        if a < b && idx.contains_key(&(b, a)) {
            let t = triple_overlap(&x.vertices[a], &x.vertices[b], &x.vertices[a])?;
            let mut coeffs = BTreeMap::new();
            *coeffs.entry(idx[&(a, b)]).or_insert(0) += 1;
            *coeffs.entry(idx[&(b, a)]).or_insert(0) += 1;
            rows.push((coeffs, overlap_degree(d_vars, &t)));
        }
    }
    for &(a, b, c) in &x.triangles {
        for (u, v, w) in
            [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]
        {
            // d(u,v) + d(v,w) − d(u,w) = Σ_{T(u,v,w)} d_i
            let t = triple_overlap(&x.vertices[u], &x.vertices[v], &x.vertices[w])?;
            let mut rhs = overlap_degree(d_vars, &t);
            let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
            let mut touches_unknown = false;
            for (edge, sign) in [((u, v), 1i64), ((v, w), 1), ((u, w), -1)] {
                if let Some(val) = d.get(&edge) {
                    rhs -= sign * val;
                } else if let Some(&col) = idx.get(&edge) {
                    *coeffs.entry(col).or_insert(0) += sign;
                    touches_unknown = true;
                } else {
                    return Err(Error::GradingInconsistent(
                        "edge missing from residual system".into(),
                    ));
                }
            }
            if touches_unknown {
                rows.push((coeffs, rhs));
            }
        }
    }
    let mat = SparseMatrix::from_triples(
        rows.len(),
        unknowns.len(),
        rows.iter()
            .enumerate()
            .flat_map(|(r, (coeffs, _))| coeffs.iter().map(move |(&c, &v)| (r, c, BigInt::from(v)))),
    )?;
    let rhs: Vec<BigInt> = rows.iter().map(|(_, b)| BigInt::from(*b)).collect();
    let sol = solve_integer_system(&mat, &rhs)?
        .ok_or_else(|| Error::GradingInconsistent("no integer solution".into()))?;
    for (i, edge) in unknowns.iter().enumerate() {
        let val = i64::try_from(&sol[i])
            .map_err(|_| Error::GradingInconsistent("solution exceeds i64".into()))?;
        d.insert(*edge, val);
    }
    undetermined.clear();
    Ok(())
}

/// Checks the cocycle identity on every ordered pairwise-close triple,
/// degenerate triples included.
fn verify_grading(x: &ComplexX, d_vars: &[i64], sol: &GradingSolution) -> Result<()> {
    let m = x.vertices.len();
    let mut close = vec![vec![false; m]; m];
    for (i, row) in close.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in &x.edges {
        close[a][b] = true;
        close[b][a] = true;
    }
    let get = |a: usize, b: usize| -> Result<i64> {
        sol.pair_degree(&x.vertices[a], &x.vertices[b]).ok_or_else(|| {
            Error::GradingInconsistent(format!(
                "missing pair ({},{})",
                x.vertices[a], x.vertices[b]
            ))
        })
    };
    for a in 0..m {
        for b in 0..m {
            if !close[a][b] {
                continue;
            }
            for c in 0..m {
                if !close[b][c] || !close[a][c] {
                    continue;
                }
                let t = triple_overlap(&x.vertices[a], &x.vertices[b], &x.vertices[c])?;
                let lhs = get(a, b)? + get(b, c)?;
                let rhs = overlap_degree(d_vars, &t) + get(a, c)?;
                if lhs != rhs {
                    return Err(Error::GradingInconsistent(format!(
                        "triple ({},{},{}): {lhs} ≠ {rhs}",
                        x.vertices[a], x.vertices[b], x.vertices[c]
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(k: u8, e: &[u8]) -> SubsetLabel {
        SubsetLabel::new(k, e.to_vec()).unwrap()
    }

    #[test]
    fn identity_is_close() {
        let s = sl(3, &[1, 2]);
        assert!(is_close(&s, &s).unwrap());
    }

    #[test]
    fn far_pair_is_not_close() {
        assert!(!is_close(&sl(3, &[2, 3]), &sl(3, &[0, 1])).unwrap());
    }

    #[test]
    fn interleaved_pair_is_close() {
        assert!(is_close(&sl(3, &[0, 2]), &sl(3, &[1, 3])).unwrap());
    }

    #[test]
    fn bijections_of_identity_pair() {
        // {1,2} → {1,2}: the identity and the adjacent swap
        let b = enumerate_bijections(&sl(3, &[1, 2]), &sl(3, &[1, 2])).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.contains(&vec![1, 2]));
        assert!(b.contains(&vec![2, 1]));
    }

    #[test]
    fn bijections_empty_when_far() {
        assert!(enumerate_bijections(&sl(2, &[0]), &sl(2, &[2])).unwrap().is_empty());
    }

    #[test]
    fn bijections_unique_when_forced() {
        let b = enumerate_bijections(&sl(3, &[0, 2]), &sl(3, &[1, 3])).unwrap();
        assert_eq!(b, vec![vec![1, 3]]);
    }

    #[test]
    fn close_iff_bijection_exists_exhaustive() {
        for k in 1..=4u8 {
            for n in 1..=(k as usize + 1).min(3) {
                let all = SubsetLabel::all(n, k);
                for s in &all {
                    for s2 in &all {
                        let fast = is_close(s, s2).unwrap();
                        let brute = !enumerate_bijections(s, s2).unwrap().is_empty();
                        assert_eq!(fast, brute, "disagree on ({s},{s2})");
                    }
                }
            }
        }
    }

    #[test]
    fn partition_of_identity_pair() {
        let s = sl(3, &[1, 2]);
        let p = close_partition(&s, &s).unwrap();
        assert!(p.up_intervals.is_empty());
        assert!(p.down_intervals.is_empty());
        assert_eq!(p.fixed, vec![1, 2]);
    }

    #[test]
    fn partition_two_up_intervals() {
        let p = close_partition(&sl(3, &[0, 2]), &sl(3, &[1, 3])).unwrap();
        assert_eq!(
            p.up_intervals,
            vec![IntervalLabel::range(0, 1).unwrap(), IntervalLabel::range(2, 3).unwrap()]
        );
        assert!(p.down_intervals.is_empty());
        assert!(p.fixed.is_empty());
    }

    #[test]
    fn partition_single_down_interval() {
        let p = close_partition(&sl(3, &[1]), &sl(3, &[0])).unwrap();
        assert!(p.up_intervals.is_empty());
        assert_eq!(p.down_intervals, vec![IntervalLabel::range(0, 1).unwrap()]);
    }

    #[test]
    fn partition_rejects_non_close() {
        assert!(matches!(
            close_partition(&sl(3, &[2, 3]), &sl(3, &[0, 1])),
            Err(Error::NotClose)
        ));
    }

    #[test]
    fn partition_swaps_under_reversal() {
        for k in 2..=4u8 {
            for n in 1..=3.min(k as usize + 1) {
                let all = SubsetLabel::all(n, k);
                for s in &all {
                    for s2 in &all {
                        if is_close(s, s2).unwrap() {
                            let p = close_partition(s, s2).unwrap();
                            let q = close_partition(s2, s).unwrap();
                            assert_eq!(p.up_intervals, q.down_intervals);
                            assert_eq!(p.down_intervals, q.up_intervals);
                            assert_eq!(p.fixed, q.fixed);
                        }
                    }
                }
            }
        }
    }

    /// Independent partition extraction: decompose a bijection into moved
    /// runs and swaps, then discard the swaps.
    fn partition_from_bijection(s: &SubsetLabel, g: &[u8]) -> (Vec<IntervalLabel>, Vec<IntervalLabel>) {
        let elems = s.elems();
        let mut ups = Vec::new();
        let mut downs = Vec::new();
        let mut i = 0usize;
        while i < elems.len() {
            let x = elems[i];
            if g[i] == x {
                i += 1;
            } else if g[i] == x + 1 {
                if i + 1 < elems.len() && elems[i + 1] == x + 1 && g[i + 1] == x {
                    i += 2; // adjacent swap: discard
                    continue;
                }
                // up run: consecutive elements all moving up
                let lo = x;
                let mut j = i;
                while j < elems.len()
                    && elems[j] == lo + (j - i) as u8
                    && g[j] == elems[j] + 1
                {
                    j += 1;
                }
                ups.push(IntervalLabel::range(lo, elems[j - 1] + 1).unwrap());
                i = j;
            } else {
                // down run
                let lo = x - 1;
                let mut j = i;
                while j < elems.len()
                    && elems[j] == x + (j - i) as u8
                    && g[j] + 1 == elems[j]
                {
                    j += 1;
                }
                downs.push(IntervalLabel::range(lo, elems[j - 1]).unwrap());
                i = j;
            }
        }
        (ups, downs)
    }

    #[test]
    fn partition_independent_of_bijection() {
        for k in 2..=4u8 {
            for n in 1..=3.min(k as usize + 1) {
                let all = SubsetLabel::all(n, k);
                for s in &all {
                    for s2 in &all {
                        let bs = enumerate_bijections(s, s2).unwrap();
                        if bs.is_empty() {
                            continue;
                        }
                        let p = close_partition(s, s2).unwrap();
                        for g in &bs {
                            let (ups, downs) = partition_from_bijection(s, g);
                            assert_eq!(ups, p.up_intervals, "ups for ({s},{s2}), g={g:?}");
                            assert_eq!(downs, p.down_intervals, "downs for ({s},{s2}), g={g:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn triple_overlap_identity_triple() {
        let s = sl(3, &[1, 2]);
        assert!(triple_overlap(&s, &s, &s).unwrap().is_empty());
    }

    #[test]
    fn triple_overlap_two_separate_pieces() {
        // {1,3} → {0,2} → {1,3}: pieces [0,1] and [2,3] touch at nothing;
        // the result is {1,3}, not {1,2,3}.
        let s = sl(3, &[1, 3]);
        let s2 = sl(3, &[0, 2]);
        let t = triple_overlap(&s, &s2, &s).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn triple_overlap_single_loop() {
        let s = sl(2, &[0]);
        let s2 = sl(2, &[1]);
        let t = triple_overlap(&s, &s2, &s).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn complex_x_1_1_is_a_segment() {
        let x = build_complex_x(1, 1).unwrap();
        assert_eq!(x.vertices.len(), 2);
        assert_eq!(x.edges.len(), 1);
        assert!(x.triangles.is_empty());
    }

    #[test]
    fn complex_x_point_when_n_is_k_plus_1() {
        for k in 1..=4u8 {
            let x = build_complex_x(k as usize + 1, k).unwrap();
            assert_eq!(x.vertices.len(), 1);
            assert!(x.edges.is_empty());
        }
    }

    #[test]
    fn complex_x_2_3_counts() {
        // frozen from the brute-force closeness oracle
        let x = build_complex_x(2, 3).unwrap();
        assert_eq!(x.vertices.len(), 6);
        assert_eq!(x.edges.len(), 10);
        assert_eq!(x.triangles.len(), 6);
    }

    #[test]
    fn h1_vanishes_small() {
        for (n, k) in [(1usize, 1u8), (1, 2), (2, 3), (2, 4), (3, 4)] {
            let x = build_complex_x(n, k).unwrap();
            let (betti, torsion) = h1_of_x(&x).unwrap();
            assert_eq!(betti, 0, "betti_1 of X({n},{k})");
            assert!(torsion.is_empty(), "torsion of X({n},{k})");
        }
    }

    #[test]
    fn grading_zero_vars_gives_zero_pairs() {
        let sol = solve_grading(2, 3, &[0, 0, 0]).unwrap();
        assert!(sol.d_pairs.values().all(|&v| v == 0));
    }

    #[test]
    fn grading_trivial_on_point() {
        let sol = solve_grading(4, 3, &[1, -2, 3]).unwrap();
        assert!(sol.d_pairs.is_empty());
    }

    #[test]
    fn grading_nonzero_vars_consistent() {
        // solve_grading verifies every triple constraint before returning
        solve_grading(2, 3, &[1, 0, 0]).unwrap();
        solve_grading(2, 4, &[2, -1, 3, 0]).unwrap();
        solve_grading(1, 3, &[1, 1, -2]).unwrap();
        solve_grading(3, 4, &[-3, 2, 0, 1]).unwrap();
    }
}
