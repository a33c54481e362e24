use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::indexcalc::{MultiIndex, PolyExp};

/// A basis element of `W_beta`: one sorted multiset of `V`-basis labels per
/// polynomial slot, aligned with the canonical slot order of `beta`.
pub type WBasisElem = Vec<Vec<usize>>;

/// Monomial basis of `W_beta`, the tensor product over the distinct
/// polynomial slots `n` of the `beta(n)`-th symmetric power of `V`.
///
/// `W_{k delta_g} = R`; the `g`-part never contributes basis data.
#[derive(Clone, Debug)]
pub struct WBasis {
    beta: MultiIndex,
    dim_v: usize,
    slots: Vec<(PolyExp, u32)>,
    elems: Vec<WBasisElem>,
    index: HashMap<WBasisElem, usize>,
    coeffs: Vec<f64>,
}

impl WBasis {
    pub fn new(beta: &MultiIndex, dim_v: usize) -> Self {
        let slots: Vec<(PolyExp, u32)> = beta.poly().iter().map(|(&n, &k)| (n, k)).collect();
        let per_slot: Vec<Vec<Vec<usize>>> =
            slots.iter().map(|&(_, k)| multisets(dim_v, k as usize)).collect();
        let mut elems = vec![Vec::new()];
        for options in &per_slot {
            let mut next = Vec::with_capacity(elems.len() * options.len());
            for e in &elems {
                for o in options {
                    let mut e2: WBasisElem = e.clone();
                    e2.push(o.clone());
                    next.push(e2);
                }
            }
            elems = next;
        }
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let coeffs = elems.iter().map(|e| elem_multinomial(e)).collect();
        WBasis { beta: beta.clone(), dim_v, slots, elems, index, coeffs }
    }

    pub fn beta(&self) -> &MultiIndex {
        &self.beta
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn slots(&self) -> &[(PolyExp, u32)] {
        &self.slots
    }

    pub fn elems(&self) -> &[WBasisElem] {
        &self.elems
    }

    pub fn index_of(&self, e: &WBasisElem) -> usize {
        self.index[e]
    }

    /// Multinomial weight `c_M` of element `i` (product over slots of
    /// `k! / prod_j mult_j!`).
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs[i]
    }

    /// Index of the product element obtained by merging an element of `b1`
    /// and an element of `b2` slotwise (`self` must be the basis of
    /// `b1.beta + b2.beta`).
    pub fn merge_index(&self, b1: &WBasis, e1: usize, b2: &WBasis, e2: usize) -> usize {
        let e1 = &b1.elems[e1];
        let e2 = &b2.elems[e2];
        let mut merged: WBasisElem = Vec::with_capacity(self.slots.len());
        for &(n, _) in &self.slots {
            let mut labels = Vec::new();
            if let Some(p) = b1.slot_pos(&n) {
                labels.extend_from_slice(&e1[p]);
            }
            if let Some(p) = b2.slot_pos(&n) {
                labels.extend_from_slice(&e2[p]);
            }
            labels.sort_unstable();
            merged.push(labels);
        }
        self.index[&merged]
    }

    fn slot_pos(&self, n: &PolyExp) -> Option<usize> {
        self.slots.iter().position(|(m, _)| m == n)
    }
}

fn multisets(dim_v: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(dim_v: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..dim_v {
            cur.push(v);
            rec(dim_v, k, v, cur, out);
            cur.pop();
        }
    }
    rec(dim_v, k, 0, &mut cur, &mut out);
    out
}

fn multiset_multinomial(labels: &[usize]) -> f64 {
    let k = labels.len() as u32;
    let mut num: f64 = (1..=k).map(|i| i as f64).product();
    let mut i = 0;
    while i < labels.len() {
        let mut j = i;
        while j < labels.len() && labels[j] == labels[i] {
            j += 1;
        }
        let m = (j - i) as u32;
        let mf: f64 = (1..=m).map(|x| x as f64).product();
        num /= mf;
        i = j;
    }
    num
}

fn elem_multinomial(e: &WBasisElem) -> f64 {
    e.iter().map(|labels| multiset_multinomial(labels)).product()
}

/// Binomial `C(n + k - 1, k)` counting multisets of size `k` over `n` labels.
fn multiset_count(n: usize, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    let mut c = 1usize;
    for i in 0..k {
        c = c * (n + i) / (i + 1);
    }
    c
}

/// `dim W_beta = prod_n C(dim_v + beta(n) - 1, beta(n))`.
pub fn dim_space(beta: &MultiIndex, dim_v: usize) -> usize {
    beta.poly()
        .values()
        .map(|&k| multiset_count(dim_v, k as usize))
        .product()
}

/// Dense matrix of the symmetrization product `W_beta ⊗ W_gamma -> W_{beta+gamma}`
/// in the monomial basis: column `i_beta * dim(W_gamma) + i_gamma`, one unit
/// entry per column. Surjective; bijective exactly when the slots of `beta`
/// and `gamma` are disjoint.
pub fn product_iso(beta: &MultiIndex, gamma: &MultiIndex, dim_v: usize) -> DMatrix<f64> {
    let b1 = WBasis::new(beta, dim_v);
    let b2 = WBasis::new(gamma, dim_v);
    let tgt = WBasis::new(&beta.add(gamma), dim_v);
    let mut m = DMatrix::zeros(tgt.dim(), b1.dim() * b2.dim());
    for i1 in 0..b1.dim() {
        for i2 in 0..b2.dim() {
            let row = tgt.merge_index(&b1, i1, &b2, i2);
            m[(row, i1 * b2.dim() + i2)] += 1.0;
        }
    }
    m
}

/// Coproduct splitting of `target` into ordered parts shaped like `b1`, `b2`:
/// all `(m, m1, m2, w)` with the integer weight `w = c(M1) c(M2)`.
///
/// The splitting coefficient proper is `w / c(M)`; callers divide the
/// accumulated column by `target.coeff(m)` once, which keeps
/// `product ∘ split = id` exact in floating point (the weights per column sum
/// to exactly `c(M)`).
pub fn split_triples(target: &WBasis, b1: &WBasis, b2: &WBasis) -> Vec<(usize, usize, usize, f64)> {
    // Shape check: slot multiplicities must add up.
    debug_assert_eq!(*target.beta().poly(), {
        let mut sum = b1.beta().poly().clone();
        for (&n, &k) in b2.beta().poly() {
            *sum.entry(n).or_insert(0) += k;
        }
        sum
    });
    let mut out = Vec::new();
    for (m, elem) in target.elems().iter().enumerate() {
        // Per-slot distinct splits of the label multiset.
        let mut partials: Vec<(WBasisElem, WBasisElem, f64)> =
            vec![(Vec::new(), Vec::new(), 1.0)];
        for (pos, &(n, _)) in target.slots().iter().enumerate() {
            let k1 = b1.beta().poly().get(&n).copied().unwrap_or(0) as usize;
            let k2 = b2.beta().poly().get(&n).copied().unwrap_or(0) as usize;
            let splits = multiset_splits(&elem[pos], k1);
            let mut next = Vec::with_capacity(partials.len() * splits.len());
            for (part1, part2) in &splits {
                debug_assert_eq!(part2.len(), k2);
                let w = multiset_multinomial(part1) * multiset_multinomial(part2);
                for (e1, e2, k) in &partials {
                    let mut e1 = e1.clone();
                    let mut e2 = e2.clone();
                    if k1 > 0 {
                        e1.push(part1.clone());
                    }
                    if k2 > 0 {
                        e2.push(part2.clone());
                    }
                    next.push((e1, e2, k * w));
                }
            }
            partials = next;
        }
        for (e1, e2, w) in partials {
            out.push((m, b1.index_of(&e1), b2.index_of(&e2), w));
        }
    }
    out
}

/// Distinct ordered splits of a sorted multiset into parts of sizes
/// `(k1, len - k1)`.
fn multiset_splits(labels: &[usize], k1: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    // Group into (value, multiplicity).
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &v in labels {
        match groups.last_mut() {
            Some((gv, m)) if *gv == v => *m += 1,
            _ => groups.push((v, 1)),
        }
    }
    let mut out = Vec::new();
    fn rec(
        groups: &[(usize, usize)],
        pos: usize,
        left: usize,
        part1: &mut Vec<usize>,
        part2: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if pos == groups.len() {
            if left == 0 {
                out.push((part1.clone(), part2.clone()));
            }
            return;
        }
        let (v, m) = groups[pos];
        let rest: usize = groups[pos + 1..].iter().map(|&(_, m)| m).sum();
        for take in 0..=m.min(left) {
            if left - take > rest {
                continue;
            }
            let l1 = part1.len();
            let l2 = part2.len();
            part1.extend(std::iter::repeat(v).take(take));
            part2.extend(std::iter::repeat(v).take(m - take));
            rec(groups, pos + 1, left - take, part1, part2, out);
            part1.truncate(l1);
            part2.truncate(l2);
        }
    }
    rec(&groups, 0, k1, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexcalc::MultiIndex;

    fn d0() -> PolyExp {
        PolyExp::ZERO
    }

    #[test]
    fn dims() {
        // W_{k delta_g} = R
        assert_eq!(dim_space(&MultiIndex::delta_g(4), 9), 1);
        // dim V for one slot
        assert_eq!(dim_space(&MultiIndex::delta_n(d0()), 9), 9);
        // Sym^2 V
        assert_eq!(dim_space(&MultiIndex::from_parts(0, &[(d0(), 2)]), 9), 45);
        // distinct slots multiply
        let b = MultiIndex::from_parts(0, &[(d0(), 1), (PolyExp::e(1), 1)]);
        assert_eq!(dim_space(&b, 9), 81);
        // matches basis enumeration
        for beta in [
            MultiIndex::delta_g(2),
            MultiIndex::from_parts(1, &[(d0(), 2)]),
            MultiIndex::from_parts(0, &[(d0(), 2), (PolyExp::e(2), 1)]),
        ] {
            assert_eq!(WBasis::new(&beta, 9).dim(), dim_space(&beta, 9));
        }
    }

    #[test]
    fn product_on_trivial_slots_is_identity() {
        let m = product_iso(&MultiIndex::delta_g(1), &MultiIndex::delta_g(1), 9);
        assert_eq!(m.nrows(), 1);
        assert_eq!(m.ncols(), 1);
        assert_eq!(m[(0, 0)], 1.0);
    }

    #[test]
    fn symmetrization_convention() {
        // e_a ⊗ e_b + e_b ⊗ e_a -> 2 (e_a ⊙ e_b)
        let d = MultiIndex::delta_n(d0());
        let m = product_iso(&d, &d, 3);
        let tgt = WBasis::new(&MultiIndex::from_parts(0, &[(d0(), 2)]), 3);
        let (a, b) = (0usize, 1usize);
        let mut x = DMatrix::zeros(9, 1);
        x[(a * 3 + b, 0)] = 1.0;
        x[(b * 3 + a, 0)] = 1.0;
        let y = &m * &x;
        let row = tgt.index_of(&vec![vec![a, b]]);
        for i in 0..y.nrows() {
            assert_eq!(y[(i, 0)], if i == row { 2.0 } else { 0.0 });
        }
    }

    #[test]
    fn product_is_surjective_and_split_is_a_section() {
        let cases = [
            (MultiIndex::delta_n(d0()), MultiIndex::delta_n(d0())),
            (
                MultiIndex::from_parts(1, &[(d0(), 1)]),
                MultiIndex::from_parts(0, &[(d0(), 1), (PolyExp::e(1), 1)]),
            ),
            (
                MultiIndex::from_parts(0, &[(d0(), 2)]),
                MultiIndex::delta_n(d0()),
            ),
        ];
        for (beta, gamma) in cases {
            let dim_v = 3;
            let m = product_iso(&beta, &gamma, dim_v);
            let tgt = WBasis::new(&beta.add(&gamma), dim_v);
            assert_eq!(m.rank(1e-10), tgt.dim());
            // product ∘ split = identity, exactly
            let b1 = WBasis::new(&beta, dim_v);
            let b2 = WBasis::new(&gamma, dim_v);
            let mut composed = DMatrix::<f64>::zeros(tgt.dim(), tgt.dim());
            for (mi, m1, m2, w) in split_triples(&tgt, &b1, &b2) {
                let col = m1 * b2.dim() + m2;
                for r in 0..tgt.dim() {
                    composed[(r, mi)] += w * m[(r, col)];
                }
            }
            for j in 0..tgt.dim() {
                let cm = tgt.coeff(j);
                for i in 0..tgt.dim() {
                    let expect = if i == j { cm } else { 0.0 };
                    assert_eq!(composed[(i, j)], expect);
                }
            }
        }
    }

    #[test]
    fn split_weights_sum_to_full_multinomial() {
        // Vandermonde: sum over distinct splits of c(M1) c(M2) = c(M)
        let beta = MultiIndex::from_parts(0, &[(d0(), 2)]);
        let gamma = MultiIndex::delta_n(d0());
        let tgt = WBasis::new(&beta.add(&gamma), 3);
        let b1 = WBasis::new(&beta, 3);
        let b2 = WBasis::new(&gamma, 3);
        let mut sums = vec![0.0; tgt.dim()];
        for (m, _, _, w) in split_triples(&tgt, &b1, &b2) {
            sums[m] += w;
        }
        for (m, s) in sums.iter().enumerate() {
            assert!((s - tgt.coeff(m)).abs() < 1e-12, "elem {m}: {s}");
        }
    }
}
