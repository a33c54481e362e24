use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exponent tuple `n = (n0, n1, n2, n3)` indexing monomials `x^n` and
/// derivatives `d^n` on space-time; `n0` is the time slot.
///
/// Ordered graded-lexicographically by `(|n|, n0, n1, n2, n3)` where
/// `|n| = 2 n0 + n1 + n2 + n3` is the parabolic degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PolyExp(pub [u32; 4]);

impl PolyExp {
    pub const ZERO: PolyExp = PolyExp([0; 4]);

    pub fn e(i: usize) -> PolyExp {
        let mut n = [0u32; 4];
        n[i] = 1;
        PolyExp(n)
    }

    /// Parabolic degree `2 n0 + n1 + n2 + n3`.
    pub fn parabolic_degree(&self) -> u32 {
        2 * self.0[0] + self.0[1] + self.0[2] + self.0[3]
    }

    /// Euclidean total degree `n0 + n1 + n2 + n3`.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&k| fact(k)).product()
    }

    /// Multi-binomial `C(self, k)`, zero unless `k <= self` componentwise.
    pub fn binomial(&self, k: &PolyExp) -> f64 {
        let mut b = 1.0;
        for i in 0..4 {
            if k.0[i] > self.0[i] {
                return 0.0;
            }
            b *= binom(self.0[i], k.0[i]);
        }
        b
    }

    pub fn checked_sub(&self, rhs: &PolyExp) -> Option<PolyExp> {
        let mut out = [0u32; 4];
        for i in 0..4 {
            out[i] = self.0[i].checked_sub(rhs.0[i])?;
        }
        Some(PolyExp(out))
    }

    pub fn add(&self, rhs: &PolyExp) -> PolyExp {
        let mut out = [0u32; 4];
        for i in 0..4 {
            out[i] = self.0[i] + rhs.0[i];
        }
        PolyExp(out)
    }

    /// All exponents of exact parabolic degree `d`.
    pub fn with_parabolic_degree(d: u32) -> Vec<PolyExp> {
        let mut out = Vec::new();
        for n0 in 0..=(d / 2) {
            let rest = d - 2 * n0;
            for n1 in 0..=rest {
                for n2 in 0..=(rest - n1) {
                    let n3 = rest - n1 - n2;
                    out.push(PolyExp([n0, n1, n2, n3]));
                }
            }
        }
        out.sort();
        out
    }

    /// All exponents of parabolic degree at most `d`.
    pub fn up_to_parabolic_degree(d: u32) -> Vec<PolyExp> {
        let mut out = Vec::new();
        for deg in 0..=d {
            out.extend(Self::with_parabolic_degree(deg));
        }
        out
    }
}

fn fact(k: u32) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn binom(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b.round()
}

impl Ord for PolyExp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.parabolic_degree(), self.0).cmp(&(other.parabolic_degree(), other.0))
    }
}

impl PartialOrd for PolyExp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PolyExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Populated-set membership flags for a multi-index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    /// Purely polynomial: `beta = delta_n`.
    pub in_mpp: bool,
    /// `[beta] >= 0`.
    pub in_mgeq0: bool,
    /// `[beta] >= 0`, or `delta_g + delta_n + delta_n'`, or
    /// `2 delta_g + delta_n + delta_n' + delta_n''`.
    pub in_mprime: bool,
    /// `in_mprime || in_mpp`.
    pub in_m: bool,
}

/// Sparse multi-index over `{g} ∪ N^4`: the combinatorial atom of the model.
///
/// `g_count` tracks powers of the coupling constant, `poly` tracks polynomial
/// slots with their multiplicities (finitely supported).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiIndex {
    g_count: u32,
    poly: BTreeMap<PolyExp, u32>,
}

impl MultiIndex {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta_g(k: u32) -> Self {
        MultiIndex { g_count: k, poly: BTreeMap::new() }
    }

    pub fn delta_n(n: PolyExp) -> Self {
        let mut poly = BTreeMap::new();
        poly.insert(n, 1);
        MultiIndex { g_count: 0, poly }
    }

    pub fn from_parts(g_count: u32, parts: &[(PolyExp, u32)]) -> Self {
        let mut poly = BTreeMap::new();
        for &(n, k) in parts {
            if k > 0 {
                *poly.entry(n).or_insert(0) += k;
            }
        }
        MultiIndex { g_count, poly }
    }

    pub fn g_count(&self) -> u32 {
        self.g_count
    }

    pub fn poly(&self) -> &BTreeMap<PolyExp, u32> {
        &self.poly
    }

    /// Total number of polynomial slots (with multiplicity).
    pub fn poly_total(&self) -> u32 {
        self.poly.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.g_count == 0 && self.poly.is_empty()
    }

    /// `Some(n)` iff `self == delta_n`.
    pub fn as_pure_poly(&self) -> Option<PolyExp> {
        if self.g_count == 0 && self.poly.len() == 1 {
            let (&n, &k) = self.poly.iter().next().unwrap();
            if k == 1 {
                return Some(n);
            }
        }
        None
    }

    /// Population count `[beta] = beta(g) - sum_n beta(n)`.
    pub fn population(&self) -> i64 {
        self.g_count as i64 - self.poly_total() as i64
    }

    /// Membership flags in the populated sets.
    pub fn membership(&self) -> Membership {
        let in_mpp = self.as_pure_poly().is_some();
        let in_mgeq0 = self.population() >= 0;
        let p = self.poly_total();
        let in_mprime = in_mgeq0
            || (self.g_count == 1 && p == 2)
            || (self.g_count == 2 && p == 3);
        Membership { in_mpp, in_mgeq0, in_mprime, in_m: in_mprime || in_mpp }
    }

    pub fn add(&self, rhs: &MultiIndex) -> MultiIndex {
        let mut out = self.clone();
        out.g_count += rhs.g_count;
        for (&n, &k) in &rhs.poly {
            *out.poly.entry(n).or_insert(0) += k;
        }
        out
    }

    pub fn checked_sub(&self, rhs: &MultiIndex) -> Option<MultiIndex> {
        let g_count = self.g_count.checked_sub(rhs.g_count)?;
        let mut poly = self.poly.clone();
        for (&n, &k) in &rhs.poly {
            let slot = poly.get_mut(&n)?;
            *slot = slot.checked_sub(k)?;
            if *slot == 0 {
                poly.remove(&n);
            }
        }
        Some(MultiIndex { g_count, poly })
    }

    /// All multi-indices `beta1 <= self` componentwise, in a fixed order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let slots: Vec<(PolyExp, u32)> = self.poly.iter().map(|(&n, &k)| (n, k)).collect();
        let mut out = Vec::new();
        let mut stack = vec![(0usize, MultiIndex::zero())];
        while let Some((pos, cur)) = stack.pop() {
            if pos == slots.len() {
                for g in 0..=self.g_count {
                    let mut m = cur.clone();
                    m.g_count = g;
                    out.push(m);
                }
                continue;
            }
            let (n, kmax) = slots[pos];
            for k in 0..=kmax {
                let mut m = cur.clone();
                if k > 0 {
                    m.poly.insert(n, k);
                }
                stack.push((pos + 1, m));
            }
        }
        out.sort_by_key(|m| (m.g_count, m.poly.iter().map(|(&n, &k)| (n, k)).collect::<Vec<_>>()));
        out
    }

    /// Ordered pairs `(beta1, beta2)` with `beta1 + beta2 + delta_g = self`.
    pub fn pair_decompositions(&self) -> Vec<(MultiIndex, MultiIndex)> {
        let rest = match self.checked_sub(&MultiIndex::delta_g(1)) {
            Some(r) => r,
            None => return Vec::new(),
        };
        rest.sub_indices()
            .into_iter()
            .map(|b1| {
                let b2 = rest.checked_sub(&b1).unwrap();
                (b1, b2)
            })
            .collect()
    }

    /// Ordered triples `(beta1, beta2, beta3)` with
    /// `beta1 + beta2 + beta3 + 2 delta_g = self`.
    pub fn triple_decompositions(&self) -> Vec<(MultiIndex, MultiIndex, MultiIndex)> {
        let rest = match self.checked_sub(&MultiIndex::delta_g(2)) {
            Some(r) => r,
            None => return Vec::new(),
        };
        let mut out = Vec::new();
        for b1 in rest.sub_indices() {
            let r12 = rest.checked_sub(&b1).unwrap();
            for b2 in r12.sub_indices() {
                let b3 = r12.checked_sub(&b2).unwrap();
                out.push((b1.clone(), b2, b3));
            }
        }
        out
    }

    /// Pairs `(k, beta1)` with `k delta_g + beta1 = self`, `k` in `1..=4`.
    pub fn counterterm_decompositions(&self) -> Vec<(u32, MultiIndex)> {
        (1..=4u32)
            .filter_map(|k| {
                self.checked_sub(&MultiIndex::delta_g(k)).map(|b1| (k, b1))
            })
            .collect()
    }

    /// Canonical tie-break key: `(g_count, sorted poly)`.
    pub fn tie_break_key(&self) -> (u32, Vec<(PolyExp, u32)>) {
        (self.g_count, self.poly.iter().map(|(&n, &k)| (n, k)).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        if self.g_count > 0 {
            parts.push(if self.g_count == 1 {
                "g".to_string()
            } else {
                format!("g^{}", self.g_count)
            });
        }
        for (&n, &k) in &self.poly {
            parts.push(if k == 1 { format!("{n}") } else { format!("{n}^{k}") });
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for MultiIndex {
    type Err = String;

    /// Parses the `Display` grammar, e.g. `1`, `g^2*(0,0,0,0)^3`, `g*(0,1,0,0)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(MultiIndex::zero());
        }
        let mut idx = MultiIndex::zero();
        for raw in s.split('*') {
            let part = raw.trim();
            let (base, pow) = match part.rsplit_once('^') {
                // '^' inside parens cannot occur with this grammar
                Some((b, p)) => (b.trim(), p.trim().parse::<u32>().map_err(|e| e.to_string())?),
                None => (part, 1),
            };
            if base == "g" {
                idx.g_count += pow;
            } else {
                let inner = base
                    .strip_prefix('(')
                    .and_then(|b| b.strip_suffix(')'))
                    .ok_or_else(|| format!("bad multi-index factor: {part}"))?;
                let comps: Vec<u32> = inner
                    .split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?;
                if comps.len() != 4 {
                    return Err(format!("exponent tuple needs 4 components: {part}"));
                }
                let n = PolyExp([comps[0], comps[1], comps[2], comps[3]]);
                if pow > 0 {
                    *idx.poly.entry(n).or_insert(0) += pow;
                }
            }
        }
        Ok(idx)
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            g: u32,
            poly: Vec<(&'a PolyExp, u32)>,
        }
        Repr { g: self.g_count, poly: self.poly.iter().map(|(n, &k)| (n, k)).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            g: u32,
            poly: Vec<(PolyExp, u32)>,
        }
        let r = Repr::deserialize(deserializer)?;
        let mut poly = BTreeMap::new();
        for (n, k) in r.poly {
            if k == 0 {
                return Err(D::Error::custom("zero multiplicity in multi-index"));
            }
            *poly.entry(n).or_insert(0) += k;
        }
        Ok(MultiIndex { g_count: r.g, poly })
    }
}
