//! SAT instances and their encoding as colored Wang regions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadgets::{build_2sat_variable_column, count_gadget_tilings, GadgetError, GadgetTileset, GadgetTiling};
use crate::geometry::{Region, Side};
use crate::solve::{SolveLimits, TilingCount};
use crate::wang::{Color, ColoredRegion, EdgeMap};

#[derive(Debug, Error)]
pub enum SatError {
    #[error("malformed expression: {0}")]
    MalformedExpression(String),
    #[error("transposition index {0} out of range")]
    BadWord(usize),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Cubic monotone 1-in-3 expression: `n` variables, `n` clauses, each variable
/// occurring exactly three times.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Expression1in3 {
    pub n: usize,
    pub clauses: Vec<[usize; 3]>,
}

impl Expression1in3 {
    pub fn new(n: usize, clauses: Vec<[usize; 3]>) -> Result<Self, SatError> {
        if clauses.len() != n {
            return Err(SatError::MalformedExpression(format!("{} clauses for {n} variables", clauses.len())));
        }
        let mut occ = vec![0usize; n];
        for c in &clauses {
            for &v in c {
                if v >= n {
                    return Err(SatError::MalformedExpression(format!("variable {v} out of range")));
                }
                occ[v] += 1;
            }
        }
        if let Some(v) = occ.iter().position(|&k| k != 3) {
            return Err(SatError::MalformedExpression(format!("variable {v} occurs {} times", occ[v])));
        }
        Ok(Expression1in3 { n, clauses })
    }

    /// Parses one clause per line, e.g. `x y x`; names are numbered by first use.
    pub fn parse(text: &str) -> Result<Self, SatError> {
        let mut names: Vec<String> = Vec::new();
        let mut clauses = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(SatError::Parse { line: i + 1, msg: "expected three variables".into() });
            }
            let mut c = [0; 3];
            for (k, t) in toks.iter().enumerate() {
                c[k] = match names.iter().position(|n| n == t) {
                    Some(p) => p,
                    None => {
                        names.push(t.to_string());
                        names.len() - 1
                    }
                };
            }
            clauses.push(c);
        }
        Expression1in3::new(names.len(), clauses)
    }

    pub fn to_text(&self) -> String {
        self.clauses.iter().map(|c| format!("x{} x{} x{}\n", c[0] + 1, c[1] + 1, c[2] + 1)).collect()
    }
}

/// A literal: variable index and negation flag.
pub type Literal = (usize, bool);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Expr2SAT {
    pub vars: usize,
    pub clauses: Vec<[Literal; 2]>,
}

impl Expr2SAT {
    pub fn new(vars: usize, clauses: Vec<[Literal; 2]>) -> Result<Self, SatError> {
        for c in &clauses {
            for &(v, _) in c {
                if v >= vars {
                    return Err(SatError::MalformedExpression(format!("variable {v} out of range")));
                }
            }
        }
        Ok(Expr2SAT { vars, clauses })
    }

    /// DIMACS CNF restricted to clauses of exactly two literals.
    pub fn parse_dimacs(text: &str) -> Result<Self, SatError> {
        let mut vars = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<i64> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() < 4 || parts[1] != "cnf" {
                    return Err(SatError::Parse { line: i + 1, msg: "bad problem line".into() });
                }
                vars = Some(parts[2].parse::<usize>().map_err(|e| SatError::Parse { line: i + 1, msg: e.to_string() })?);
                continue;
            }
            for tok in line.split_whitespace() {
                let v: i64 = tok.parse().map_err(|_| SatError::Parse { line: i + 1, msg: format!("bad literal {tok}") })?;
                if v == 0 {
                    if pending.len() != 2 {
                        return Err(SatError::Parse { line: i + 1, msg: "only 2-literal clauses are supported".into() });
                    }
                    let lit = |x: i64| ((x.unsigned_abs() - 1) as usize, x < 0);
                    clauses.push([lit(pending[0]), lit(pending[1])]);
                    pending.clear();
                } else {
                    pending.push(v);
                }
            }
        }
        let vars = vars.ok_or(SatError::Parse { line: 0, msg: "missing problem line".into() })?;
        Expr2SAT::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            let l = |(v, neg): Literal| if neg { -(v as i64 + 1) } else { v as i64 + 1 };
            s += &format!("{} {} 0\n", l(c[0]), l(c[1]));
        }
        s
    }

    /// Adds `x or not x` for every variable lacking a positive or a negative
    /// occurrence. The model count does not change.
    pub fn normalized(&self) -> Expr2SAT {
        let mut out = self.clone();
        for v in 0..self.vars {
            let pos = self.clauses.iter().flatten().any(|&(x, n)| x == v && !n);
            let neg = self.clauses.iter().flatten().any(|&(x, n)| x == v && n);
            if !pos || !neg {
                out.clauses.push([(v, false), (v, true)]);
            }
        }
        out
    }
}

/// Adjacent transpositions `s_i = (i, i+1)`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranspositionWord {
    pub word: Vec<usize>,
}

impl TranspositionWord {
    /// Position of every wire after applying the word left to right.
    pub fn apply(&self, wires: usize) -> Result<Vec<usize>, SatError> {
        let mut at: Vec<usize> = (0..wires).collect();
        for &i in &self.word {
            if i == 0 || i >= wires {
                return Err(SatError::BadWord(i));
            }
            at.swap(i - 1, i);
        }
        // at[p] = wire at position p; invert
        let mut pos = vec![0; wires];
        for (p, &w) in at.iter().enumerate() {
            pos[w] = p;
        }
        Ok(pos)
    }
}

/// Maps occurrence slots (grouped by variable) to clause slots. The k-th
/// occurrence of a variable in reading order gets the k-th clause slot it appears in.
pub fn expression_to_permutation(e: &Expression1in3) -> Vec<usize> {
    let mut sigma = vec![0; 3 * e.n];
    let mut seen = vec![0; e.n];
    for (j, c) in e.clauses.iter().enumerate() {
        for (k, &v) in c.iter().enumerate() {
            sigma[3 * v + seen[v]] = 3 * j + k;
            seen[v] += 1;
        }
    }
    sigma
}

/// Wire layout of a normalized 2SAT instance: per variable the number of
/// positive and negative occurrences, and the occurrence-to-clause-slot map.
pub fn twosat_layout(e: &Expr2SAT) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut counts = Vec::with_capacity(e.vars);
    let mut sigma = Vec::new();
    for v in 0..e.vars {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (j, c) in e.clauses.iter().enumerate() {
            for (k, &(x, n)) in c.iter().enumerate() {
                if x == v {
                    if n {
                        neg.push(2 * j + k);
                    } else {
                        pos.push(2 * j + k);
                    }
                }
            }
        }
        counts.push((pos.len(), neg.len()));
        sigma.extend(pos);
        sigma.extend(neg);
    }
    (counts, sigma)
}

/// Bubble sort of the permutation, recording each adjacent swap.
pub fn decompose_adjacent_transpositions(perm: &[usize]) -> TranspositionWord {
    let mut a = perm.to_vec();
    let mut word = Vec::new();
    let n = a.len();
    for pass in 0..n {
        let mut swapped = false;
        for p in 0..n.saturating_sub(1 + pass) {
            if a[p] > a[p + 1] {
                a.swap(p, p + 1);
                word.push(p + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    TranspositionWord { word }
}

pub fn inversions(perm: &[usize]) -> usize {
    (0..perm.len()).map(|i| (i + 1..perm.len()).filter(|&j| perm[i] > perm[j]).count()).sum()
}

/// `c_k = 0 1 (0 2)^(k-1) 6 3`.
pub fn control_sequence(k: usize) -> Vec<Color> {
    let mut v = vec![0, 1];
    for _ in 1..k {
        v.extend([0, 2]);
    }
    v.extend([6, 3]);
    v
}

/// Top boundary `7 c_{i_1} ... c_{i_d} 0 7`.
pub fn top_string(word: &TranspositionWord) -> Vec<Color> {
    let mut v = vec![7];
    for &i in &word.word {
        v.extend(control_sequence(i));
    }
    v.extend([0, 7]);
    v
}

/// Bottom boundary `7 (0 8)^t 0 7` of the given length.
pub fn bottom_string(len: usize) -> Vec<Color> {
    assert!(len >= 3 && (len - 3) % 2 == 0, "top string length must be odd");
    let mut v = vec![7];
    for _ in 0..(len - 3) / 2 {
        v.extend([0, 8]);
    }
    v.extend([0, 7]);
    v
}

/// A rectangular colored region of `wires` bands under the given strings;
/// `left` gives the west color of every unit row.
pub fn build_region_raw(wires: usize, top: &[Color], left: &[Color]) -> ColoredRegion {
    let w = top.len() as i64;
    let h = 2 * wires as i64;
    let bottom = bottom_string(top.len());
    let region = Region::rectangle(0, 0, w, h);
    let f = |e: crate::geometry::Edge| -> Color {
        match e.side {
            Side::North => top[e.cell.x as usize],
            Side::South => bottom[e.cell.x as usize],
            Side::West => left[e.cell.y as usize],
            Side::East => 0,
        }
    };
    let boundary = EdgeMap::from_entries(region.exterior_edges().into_iter().map(|e| (e, f(e))).collect());
    ColoredRegion { region, boundary }
}

/// The region for a 1-in-3 expression with a word decomposing its permutation.
pub fn build_region(e: &Expression1in3, word: &TranspositionWord) -> Result<ColoredRegion, SatError> {
    check_word(e, word)?;
    let wires = 3 * e.n;
    Ok(build_region_raw(wires, &top_string(word), &vec![0; 2 * wires]))
}

fn check_word(e: &Expression1in3, word: &TranspositionWord) -> Result<(), SatError> {
    let pos = word.apply(3 * e.n)?;
    if pos != expression_to_permutation(e) {
        return Err(SatError::MalformedExpression("word does not realize the permutation".into()));
    }
    Ok(())
}

/// The region for a 2SAT expression (normalized first).
pub fn build_region_2sat(e: &Expr2SAT) -> Result<ColoredRegion, SatError> {
    let e = e.normalized();
    let (counts, sigma) = twosat_layout(&e);
    let word = decompose_adjacent_transpositions(&sigma);
    let mut left = Vec::new();
    for &(r, s) in &counts {
        left.extend(build_2sat_variable_column(r, s)?);
    }
    Ok(build_region_raw(sigma.len(), &top_string(&word), &left))
}

/// Counts Wang tilings of a colored region under a gadget tileset.
pub fn count_tilings_with(ts: &GadgetTileset, region: &ColoredRegion, limits: SolveLimits) -> TilingCount<GadgetTiling> {
    count_gadget_tilings(ts, region, limits)
}

/// Builds the region and counts its tilings; equals the 1-in-3 model count.
pub fn count_satisfying_assignments_via_tiling(e: &Expression1in3, ts: &GadgetTileset, limits: SolveLimits) -> Result<TilingCount<GadgetTiling>, SatError> {
    let word = decompose_adjacent_transpositions(&expression_to_permutation(e));
    let region = build_region(e, &word)?;
    Ok(count_tilings_with(ts, &region, limits))
}

/// As [`count_satisfying_assignments_via_tiling`] for 2SAT.
pub fn count_2sat_via_tiling(e: &Expr2SAT, ts: &GadgetTileset, limits: SolveLimits) -> Result<TilingCount<GadgetTiling>, SatError> {
    let region = build_region_2sat(e)?;
    Ok(count_tilings_with(ts, &region, limits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_examples() {
        let e = Expression1in3::new(1, vec![[0, 0, 0]]).unwrap();
        assert_eq!(expression_to_permutation(&e), vec![0, 1, 2]);
        let e1 = Expression1in3::new(2, vec![[0, 1, 0], [0, 1, 1]]).unwrap();
        let one_based: Vec<usize> = expression_to_permutation(&e1).iter().map(|x| x + 1).collect();
        assert_eq!(one_based, vec![1, 3, 4, 2, 5, 6]);
        let e3 = Expression1in3::new(3, vec![[0, 1, 2]; 3]).unwrap();
        let s = expression_to_permutation(&e3);
        assert_eq!(&s[0..3], &[0, 3, 6]);
        assert_eq!(&s[3..6], &[1, 4, 7]);
        assert_eq!(&s[6..9], &[2, 5, 8]);
    }

    #[test]
    fn decomposition_examples() {
        assert!(decompose_adjacent_transpositions(&[0, 1, 2]).word.is_empty());
        assert_eq!(decompose_adjacent_transpositions(&[1, 0]).word, vec![1]);
        let p = [1, 2, 0];
        let w = decompose_adjacent_transpositions(&p);
        assert_eq!(w.word.len(), 2);
        assert_eq!(w.apply(3).unwrap(), p.to_vec());
    }

    #[test]
    fn strings() {
        assert_eq!(control_sequence(2), vec![0, 1, 0, 2, 6, 3]);
        let w = TranspositionWord { word: vec![1] };
        assert_eq!(top_string(&w), vec![7, 0, 1, 6, 3, 0, 7]);
        assert_eq!(bottom_string(7), vec![7, 0, 8, 0, 8, 0, 7]);
    }

    #[test]
    fn malformed_rejected() {
        assert!(Expression1in3::new(2, vec![[0, 0, 0], [1, 1, 0]]).is_err());
        assert!(Expression1in3::new(1, vec![[0, 0, 0], [0, 0, 0]]).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let e = Expression1in3::parse("x y x\nx y y\n").unwrap();
        assert_eq!(e.clauses, vec![[0, 1, 0], [0, 1, 1]]);
        assert_eq!(Expression1in3::parse(&e.to_text()).unwrap(), e);
        let d = Expr2SAT::parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0\n").unwrap();
        assert_eq!(d.clauses, vec![[(0, false), (1, false)], [(0, true), (1, true)]]);
        assert_eq!(Expr2SAT::parse_dimacs(&d.to_dimacs()).unwrap(), d);
    }

    #[test]
    fn region_dimensions() {
        let e = Expression1in3::new(2, vec![[0, 1, 0], [0, 1, 1]]).unwrap();
        let w = decompose_adjacent_transpositions(&expression_to_permutation(&e));
        let r = build_region(&e, &w).unwrap();
        let (_, _, x1, y1) = r.region.bbox();
        assert_eq!(y1 + 1, 12);
        let expect: usize = 3 + w.word.iter().map(|i| 2 * i + 2).sum::<usize>();
        assert_eq!(x1 as usize + 1, expect);
    }
}
