//! Partitions, Littlewood–Richardson coefficients and the restriction of
//! `GL(n)` irreducibles to `O(n)`, all in exact integer arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Index;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};

/// Integer partition; trailing zeros are dropped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `(k)`, a single row.
    pub fn row(k: usize) -> Self {
        Self::new(vec![k]).expect("a single row is a partition")
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Young diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (0..other.len()).all(|i| self[i] >= other[i])
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (0..cols)
            .map(|c| self.parts.iter().filter(|&&r| r > c).count())
            .collect();
        Partition { parts }
    }

    pub fn all_even(&self) -> bool {
        self.parts.iter().all(|p| p % 2 == 0)
    }

    /// All partitions of `n`, largest first in lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if left == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for k in (1..=left.min(max)).rev() {
                cur.push(k);
                rec(left - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Dimension of the `GL(n)` irreducible `S_λ ℂⁿ` by the hook-content formula.
    pub fn gl_dimension(&self, n: usize) -> u128 {
        if self.len() > n {
            return 0;
        }
        let conj = self.conjugate();
        let (mut num, mut den): (u128, u128) = (1, 1);
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len {
                let hook = (len - c) + (conj[c] - r) - 1;
                num *= (n + c - r) as u128;
                den *= hook as u128;
                let g = gcd(num, den);
                num /= g;
                den /= g;
            }
        }
        debug_assert_eq!(den, 1);
        num / den
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Index<usize> for Partition {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        self.parts.get(i).unwrap_or(&0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

type LrKey = (Vec<usize>, Vec<usize>, Vec<usize>);

fn lr_cache() -> &'static Mutex<HashMap<LrKey, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<LrKey, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `N_{λμν}`: the number of LR tableaux of shape `ν/λ` and content `μ`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if lambda.size() + mu.size() != nu.size() || !nu.contains(lambda) || !nu.contains(mu) {
        return 0;
    }
    let key = (lambda.parts.clone(), mu.parts.clone(), nu.parts.clone());
    if let Some(&v) = lr_cache().lock().expect("LR cache poisoned").get(&key) {
        return v;
    }
    let v = count_lr_tableaux(lambda, mu, nu);
    lr_cache().lock().expect("LR cache poisoned").insert(key, v);
    v
}

/// Backtracking over the skew cells in reading order (rows top to bottom,
/// each right to left): rows weakly increase, columns strictly increase and
/// every prefix of the reading word is a lattice word.
fn count_lr_tableaux(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    let cells: Vec<(usize, usize)> = (0..nu.len())
        .flat_map(|r| (lambda[r]..nu[r]).rev().map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<usize>> = (0..nu.len()).map(|r| vec![0; nu[r]]).collect();
    let mut counts = vec![0usize; mu.len() + 1];

    struct Ctx<'a> {
        lambda: &'a Partition,
        mu: &'a Partition,
        nu: &'a Partition,
        cells: &'a [(usize, usize)],
    }

    fn rec(ctx: &Ctx, pos: usize, grid: &mut [Vec<usize>], counts: &mut [usize]) -> u64 {
        let Some(&(r, c)) = ctx.cells.get(pos) else {
            return 1;
        };
        let mut hi = ctx.mu.len();
        if c + 1 < ctx.nu[r] {
            hi = hi.min(grid[r][c + 1]);
        }
        let mut lo = 1;
        if r > 0 && c >= ctx.lambda[r - 1] {
            lo = grid[r - 1][c] + 1;
        }
        let mut total = 0;
        for v in lo..=hi {
            if counts[v] >= ctx.mu[v - 1] || (v > 1 && counts[v] + 1 > counts[v - 1]) {
                continue;
            }
            counts[v] += 1;
            grid[r][c] = v;
            total += rec(ctx, pos + 1, grid, counts);
            counts[v] -= 1;
        }
        grid[r][c] = 0;
        total
    }

    let ctx = Ctx {
        lambda,
        mu,
        nu,
        cells: &cells,
    };
    rec(&ctx, 0, &mut grid, &mut counts)
}

/// `S_λ ⊗ S_μ` as a map `ν ↦ N_{λμν}` (nonzero entries only).
pub fn tensor_product(lambda: &Partition, mu: &Partition) -> BTreeMap<Partition, u64> {
    Partition::all(lambda.size() + mu.size())
        .into_iter()
        .filter_map(|nu| {
            let c = lr_coefficient(lambda, mu, &nu);
            (c > 0).then_some((nu, c))
        })
        .collect()
}

/// Multiplicity of the `O(n)` irreducible `S_[λ̄]` in `S_ν`: `Σ_{δ even} N_{δλ̄ν}`.
pub fn restriction_multiplicity(nu: &Partition, lambda_bar: &Partition) -> u64 {
    if lambda_bar.size() > nu.size() {
        return 0;
    }
    Partition::all(nu.size() - lambda_bar.size())
        .iter()
        .filter(|d| d.all_even())
        .map(|d| lr_coefficient(d, lambda_bar, nu))
        .sum()
}

/// `Sym²(Symᵖ) = ⊕_{p+a even} S_(p+a, p−a)`.
pub fn sym2_of_sym(p: usize) -> Vec<Partition> {
    (0..=p)
        .filter(|a| (p + a).is_multiple_of(2))
        .map(|a| Partition::new(vec![p + a, p - a]).expect("decreasing"))
        .collect()
}

/// `Sym²(∧ᵖ) = ⊕_{a even} S_{ν_a}`, `ν_a` having `p − a` twos and `2a` ones.
pub fn sym2_of_wedge(p: usize) -> Vec<Partition> {
    (0..=p)
        .filter(|a| a % 2 == 0)
        .map(|a| {
            let parts = std::iter::repeat_n(2, p - a)
                .chain(std::iter::repeat_n(1, 2 * a))
                .collect();
            Partition::new(parts).expect("decreasing")
        })
        .collect()
}

/// The four `O(n)` types in `Sym²(∧²ℝⁿ)`.
pub fn curvature_targets() -> [(&'static str, Partition); 4] {
    [
        ("U", Partition::empty()),
        ("L", Partition::row(2)),
        ("W", Partition::new(vec![2, 2]).expect("partition")),
        ("wedge4", Partition::new(vec![1, 1, 1, 1]).expect("partition")),
    ]
}

/// Multiplicities of `U, L, W, ∧⁴` in a symmetric square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaTable {
    pub p: usize,
    pub u: u64,
    pub l: u64,
    pub w: u64,
    pub wedge4: u64,
    /// Smallest `n` for which the restriction rule is applied here.
    pub min_n: usize,
}

impl LemmaTable {
    pub fn counts(&self) -> [u64; 4] {
        [self.u, self.l, self.w, self.wedge4]
    }

    /// Refuses dimensions below the table's stable range.
    pub fn valid_for(&self, n: usize) -> Result<()> {
        if n < self.min_n {
            return Err(Error::UnsupportedDimension {
                op: "multiplicity table outside the stable range",
                n,
            });
        }
        Ok(())
    }
}

fn restrict_virtual(terms: &[(Partition, i64)], p: usize, min_n: usize) -> Result<LemmaTable> {
    let mut out = [0u64; 4];
    for (slot, (name, target)) in curvature_targets().iter().enumerate() {
        let net: i64 = terms
            .iter()
            .map(|(nu, m)| m * restriction_multiplicity(nu, target) as i64)
            .sum();
        if net < 0 {
            return Err(Error::NegativeMultiplicity {
                target: name,
                count: net,
            });
        }
        out[slot] = net as u64;
    }
    Ok(LemmaTable {
        p,
        u: out[0],
        l: out[1],
        w: out[2],
        wedge4: out[3],
        min_n,
    })
}

/// `Sym²(Symᵖ₀)` via `Sym²(Symᵖ) ⊖ Sym²(Symᵖ⁻²) ⊖ Symᵖ⊗Symᵖ⁻² ⊕ Symᵖ⁻²⊗Symᵖ⁻²`.
pub fn verify_lemma_sym(p: usize) -> Result<LemmaTable> {
    if p < 2 {
        return Err(Error::GradeOutOfRange {
            p,
            n: 0,
            context: "multiplicity tables need p ≥ 2",
        });
    }
    let mut virt: BTreeMap<Partition, i64> = BTreeMap::new();
    let mut add = |nu: Partition, m: i64| *virt.entry(nu).or_insert(0) += m;
    for nu in sym2_of_sym(p) {
        add(nu, 1);
    }
    for nu in sym2_of_sym(p - 2) {
        add(nu, -1);
    }
    let (big, small) = (Partition::row(p), Partition::row(p - 2));
    for (nu, c) in tensor_product(&big, &small) {
        add(nu, -(c as i64));
    }
    for (nu, c) in tensor_product(&small, &small) {
        add(nu, c as i64);
    }
    let terms: Vec<(Partition, i64)> = virt.into_iter().filter(|(_, m)| *m != 0).collect();
    restrict_virtual(&terms, p, 4)
}

/// `Sym²(∧ᵖ)` restricted to `O(n)`; stable for `n ≥ max(4, p + 2)`.
pub fn verify_lemma_wedge(p: usize) -> Result<LemmaTable> {
    if p < 2 {
        return Err(Error::GradeOutOfRange {
            p,
            n: 0,
            context: "multiplicity tables need p ≥ 2",
        });
    }
    let terms: Vec<(Partition, i64)> = sym2_of_wedge(p).into_iter().map(|nu| (nu, 1)).collect();
    restrict_virtual(&terms, p, (p + 2).max(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pieri_cases() {
        assert_eq!(lr_coefficient(&part(&[1]), &part(&[1]), &part(&[2])), 1);
        assert_eq!(lr_coefficient(&part(&[1]), &part(&[1]), &part(&[1, 1])), 1);
        assert_eq!(lr_coefficient(&part(&[2]), &part(&[2]), &part(&[2, 2])), 1);
    }

    #[test]
    fn classic_multiplicity_two() {
        assert_eq!(lr_coefficient(&part(&[2, 1]), &part(&[2, 1]), &part(&[3, 2, 1])), 2);
    }

    #[test]
    fn size_mismatch_is_zero() {
        assert_eq!(lr_coefficient(&part(&[2]), &part(&[1]), &part(&[2])), 0);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0]).unwrap().len(), 2);
        assert_eq!(Partition::all(5).len(), 7);
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
    }

    #[test]
    fn hook_content() {
        assert_eq!(Partition::row(2).gl_dimension(4), 10);
        assert_eq!(part(&[1, 1]).gl_dimension(4), 6);
        assert_eq!(part(&[2, 2]).gl_dimension(4), 20);
        assert_eq!(part(&[1, 1, 1]).gl_dimension(2), 0);
    }

    #[test]
    fn restriction_cases_for_l() {
        let l = Partition::row(2);
        for p in 2..7usize {
            for a in 0..=p {
                let nu = part(&[p + a, p - a]);
                let expected = match ((p + a) % 2 == 0, a) {
                    (true, 0) => 1,
                    (true, a) if a < p => 2,
                    (true, _) => 1,
                    (false, 0) => 0,
                    (false, _) => 1,
                };
                assert_eq!(restriction_multiplicity(&nu, &l), expected, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn restriction_cases_for_w() {
        let w = part(&[2, 2]);
        for p in 2..7usize {
            for a in 0..=p {
                let nu = part(&[p + a, p - a]);
                let expected = u64::from((p + a) % 2 == 0 && a < p);
                assert_eq!(restriction_multiplicity(&nu, &w), expected, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn restriction_cases_for_wedge4() {
        let target = part(&[1, 1, 1, 1]);
        for p in 2..7usize {
            for (i, nu) in sym2_of_wedge(p).iter().enumerate() {
                let a = 2 * i;
                assert_eq!(restriction_multiplicity(nu, &target), u64::from(a == 2), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn lemma_tables() {
        assert_eq!(verify_lemma_sym(2).unwrap().counts(), [1, 1, 1, 0]);
        assert_eq!(verify_lemma_sym(5).unwrap().counts(), [1, 1, 1, 0]);
        assert_eq!(verify_lemma_wedge(2).unwrap().counts(), [1, 1, 1, 1]);
        assert_eq!(verify_lemma_wedge(4).unwrap().counts(), [1, 1, 1, 1]);
        assert!(verify_lemma_wedge(4).unwrap().valid_for(5).is_err());
        assert!(verify_lemma_sym(1).is_err());
    }

    #[test]
    fn plethysm_dimensions() {
        let n = 5;
        for p in 0..5 {
            let d = Partition::row(p).gl_dimension(n);
            let total: u128 = sym2_of_sym(p).iter().map(|nu| nu.gl_dimension(n)).sum();
            assert_eq!(total, d * (d + 1) / 2);
            if p <= n {
                let e = part(&vec![1; p]).gl_dimension(n);
                let total: u128 = sym2_of_wedge(p).iter().map(|nu| nu.gl_dimension(n)).sum();
                assert_eq!(total, e * (e + 1) / 2);
            }
        }
    }
}
