//! closed-form hom/ext calculus on the contracted curves: dimension tables
//! and ordered monomial bases for maps between twists of the structure sheaf
//! of a single curve or of the two-curve chain, composition as pointwise
//! multiplication, the composition-rank matrices attached to extension
//! classes, and the strata of the projectivized extension space they cut out.
//!
//! conventions. on the chain C1 + C2 with node p, sections of degree-(1,0)
//! twists are spanned by e0, e1 with e0|_p = 0 and e1|_p = 1; sections of
//! degree-(0,1) twists by f0, f1 with f0|_p = 0 and f1|_p = 1. a basis
//! monomial of bidegree (a, b) is either e0^i e1^{a-i} + 0 (vanishing on
//! C2), the glued section e1^a + f1^b (the unique one not vanishing at p),
//! or 0 + f0^j f1^{b-j}. extension classes are written in the dual bases in
//! the same order; coefficients on the single curve are indexed a_i =
//! coefficient of (e0^i e1^{n-1-i})^dual.

use crate::algebra::{QMatrix, Rat};
use crate::cech::CechElement;
use crate::laurent::LaurentElement;
use crate::localmodel::{Divisor, ModelTag, ToricModel};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// which local model an extension class lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Single { n: i64 },
    Chain { n1: i64, n2: i64 },
}

/// dimension of the maps from the chain structure sheaf into its twist of
/// bidegree (a, b); independent of the self-intersection numbers.
pub fn hom_dimension(a: i64, b: i64) -> usize {
    if a >= 0 && b >= 0 {
        (a + b + 1) as usize
    } else if a >= 1 && b < 0 {
        a as usize
    } else if a < 0 && b >= 1 {
        b as usize
    } else {
        0
    }
}

/// a basis monomial of the hom space of bidegree (a, b) on the chain.
/// `e0` is the exponent of e0 when the first-branch part is nonzero, `f0`
/// the exponent of f0 when the second-branch part is; the glued section
/// e1^a + f1^b has both equal to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainMono {
    pub a: i64,
    pub b: i64,
    pub e0: Option<i64>,
    pub f0: Option<i64>,
}

impl ChainMono {
    pub fn pure_e(a: i64, b: i64, i: i64) -> Self {
        assert!(1 <= i && i <= a, "first-branch monomial needs 1 <= i <= a");
        ChainMono { a, b, e0: Some(i), f0: None }
    }

    pub fn glued(a: i64, b: i64) -> Self {
        assert!(a >= 0 && b >= 0, "the glued section needs a, b >= 0");
        ChainMono { a, b, e0: Some(0), f0: Some(0) }
    }

    pub fn pure_f(a: i64, b: i64, j: i64) -> Self {
        assert!(1 <= j && j <= b, "second-branch monomial needs 1 <= j <= b");
        ChainMono { a, b, e0: None, f0: Some(j) }
    }

    pub fn render(&self) -> String {
        match (self.e0, self.f0) {
            (Some(0), Some(0)) => format!("{} + {}", epow(0, self.a), fpow(0, self.b)),
            (Some(i), None) => format!("{} + 0", epow(i, self.a)),
            (None, Some(j)) => format!("0 + {}", fpow(j, self.b)),
            _ => unreachable!("not a basis monomial"),
        }
    }
}

fn epow(i: i64, a: i64) -> String {
    power_word("e0", i) + &nonempty_sep(&power_word("e0", i), &power_word("e1", a - i))
}

fn fpow(j: i64, b: i64) -> String {
    power_word("f0", j) + &nonempty_sep(&power_word("f0", j), &power_word("f1", b - j))
}

fn power_word(name: &str, k: i64) -> String {
    match k {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{k}"),
    }
}

fn nonempty_sep(left: &str, right: &str) -> String {
    if right.is_empty() {
        if left.is_empty() { "1".to_string() } else { String::new() }
    } else if left.is_empty() {
        right.to_string()
    } else {
        format!("*{right}")
    }
}

/// the ordered basis of the hom space of bidegree (a, b): first-branch
/// monomials with descending e0-exponent, then the glued section, then
/// second-branch monomials with ascending f0-exponent.
pub fn ordered_hom_basis(a: i64, b: i64) -> Vec<ChainMono> {
    let mut out = Vec::new();
    if a >= 0 && b >= 0 {
        for i in (1..=a).rev() {
            out.push(ChainMono::pure_e(a, b, i));
        }
        out.push(ChainMono::glued(a, b));
        for j in 1..=b {
            out.push(ChainMono::pure_f(a, b, j));
        }
    } else if a >= 1 && b < 0 {
        for i in (1..=a).rev() {
            out.push(ChainMono::pure_e(a, b, i));
        }
    } else if a < 0 && b >= 1 {
        for j in 1..=b {
            out.push(ChainMono::pure_f(a, b, j));
        }
    }
    assert_eq!(out.len(), hom_dimension(a, b));
    out
}

/// compose two basis monomials: pointwise multiplication branch by branch.
/// returns None when the product vanishes (first-branch against
/// second-branch annihilation through the node).
pub fn compose_basis(x: &ChainMono, y: &ChainMono) -> Option<ChainMono> {
    let a = x.a + y.a;
    let b = x.b + y.b;
    let e0 = match (x.e0, y.e0) {
        (Some(i), Some(k)) => Some(i + k),
        _ => None,
    };
    let f0 = match (x.f0, y.f0) {
        (Some(j), Some(l)) => Some(j + l),
        _ => None,
    };
    match (e0, f0) {
        (None, None) => None,
        (Some(0), Some(0)) => Some(ChainMono::glued(a, b)),
        (Some(i), None) => Some(ChainMono::pure_e(a, b, i)),
        (None, Some(j)) => Some(ChainMono::pure_f(a, b, j)),
        (Some(_), Some(_)) => unreachable!("a nonvanishing branch value forces the glued shape"),
    }
}

/// a general hom element of bidegree (a, b): a polynomial on each branch,
/// recorded by the exponent of the vanishing-at-the-node section, with
/// matching values at the node (the exponent-0 coefficients agree).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainHom {
    pub a: i64,
    pub b: i64,
    pub e: BTreeMap<i64, Rat>,
    pub f: BTreeMap<i64, Rat>,
}

impl ChainHom {
    pub fn zero(a: i64, b: i64) -> Self {
        ChainHom { a, b, e: BTreeMap::new(), f: BTreeMap::new() }
    }

    pub fn from_mono(m: &ChainMono) -> Self {
        let mut out = ChainHom::zero(m.a, m.b);
        if let Some(i) = m.e0 {
            out.e.insert(i, Rat::one());
        }
        if let Some(j) = m.f0 {
            out.f.insert(j, Rat::one());
        }
        out
    }

    pub fn add_scaled(&self, other: &Self, k: &Rat) -> Self {
        assert_eq!((self.a, self.b), (other.a, other.b), "bidegree mismatch");
        let mut out = self.clone();
        for (part, opart) in [(&mut out.e, &other.e), (&mut out.f, &other.f)] {
            for (exp, c) in opart {
                let v = part.entry(*exp).or_insert_with(Rat::zero);
                *v += c * k;
                if v.is_zero() {
                    part.remove(exp);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ChainHom::zero(self.a + other.a, self.b + other.b);
        for (part, x, y) in [
            (&mut out.e, &self.e, &other.e),
            (&mut out.f, &self.f, &other.f),
        ] {
            for (i, c) in x {
                for (k, d) in y {
                    let v = part.entry(i + k).or_insert_with(Rat::zero);
                    *v += c * d;
                    if v.is_zero() {
                        part.remove(&(i + k));
                    }
                }
            }
        }
        out
    }

    /// coordinates in the ordered basis of the element's own bidegree;
    /// panics if the element does not lie in the hom space (a branch value
    /// mismatch at the node, or a stray exponent).
    pub fn expand(&self) -> Vec<Rat> {
        let node_e = self.e.get(&0).cloned().unwrap_or_else(Rat::zero);
        let node_f = self.f.get(&0).cloned().unwrap_or_else(Rat::zero);
        assert_eq!(node_e, node_f, "branch values disagree at the node");
        for i in self.e.keys() {
            assert!(0 <= *i && *i <= self.a, "stray first-branch exponent {i}");
        }
        for j in self.f.keys() {
            assert!(0 <= *j && *j <= self.b, "stray second-branch exponent {j}");
        }
        let get = |part: &BTreeMap<i64, Rat>, k: i64| part.get(&k).cloned().unwrap_or_else(Rat::zero);
        ordered_hom_basis(self.a, self.b)
            .iter()
            .map(|m| match (m.e0, m.f0) {
                (Some(0), Some(0)) => node_e.clone(),
                (Some(i), None) => get(&self.e, i),
                (None, Some(j)) => get(&self.f, j),
                _ => unreachable!(),
            })
            .collect()
    }
}

/// an extension class in the dual ordered basis. on single(n) the
/// coordinates are a_0..a_{n-1} with a_i dual to e0^i e1^{n-1-i}; on
/// chain(n1,n2) they follow the ordered basis of bidegree (n1-2, n2-1):
/// a_{n1-2},..,a_1, then b, then c_1,..,c_{n2-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct XiClass {
    pub scenario: Scenario,
    pub coeffs: Vec<Rat>,
}

impl XiClass {
    pub fn new(scenario: Scenario, coeffs: Vec<Rat>) -> Self {
        let expected = match scenario {
            Scenario::Single { n } => {
                assert!(n >= 2, "single(n) needs n >= 2");
                n as usize
            }
            Scenario::Chain { n1, n2 } => {
                assert!(n1 >= 2 && n2 >= 2, "chain needs n1, n2 >= 2");
                (n1 + n2 - 2) as usize
            }
        };
        assert_eq!(coeffs.len(), expected, "wrong coordinate count for the scenario");
        XiClass { scenario, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        XiClass {
            scenario: self.scenario,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

/// the matrix of "compose with the extension class", from the
/// two-dimensional hom space of the destabilizing direction to the
/// self-extension target, in the fixed ordered bases.
pub fn xi_composition_matrix(xi: &XiClass) -> QMatrix {
    match xi.scenario {
        Scenario::Single { n } => {
            // source basis e1, e0 (ascending e0-exponent); rows indexed by
            // the degree-(n-2) monomials e0^r e1^{n-2-r}; the entry is the
            // extension-class coordinate of the product
            let rows = (n - 1) as usize;
            let mut m = QMatrix::zero(rows, 2);
            for r in 0..rows {
                for (c, src_exp) in [0usize, 1].iter().enumerate() {
                    m.set(r, c, xi.coeffs[r + *src_exp].clone());
                }
            }
            m
        }
        Scenario::Chain { n1, n2 } => {
            let src = ordered_hom_basis(0, 1);
            let rows = ordered_hom_basis(n1 - 2, n2 - 2);
            let mut m = QMatrix::zero(rows.len(), src.len());
            for (r, g) in rows.iter().enumerate() {
                for (c, phi) in src.iter().enumerate() {
                    let prod = ChainHom::from_mono(phi).mul(&ChainHom::from_mono(g));
                    let coords = prod.expand();
                    let mut entry = Rat::zero();
                    for (v, coeff) in coords.iter().zip(&xi.coeffs) {
                        entry += v * coeff;
                    }
                    m.set(r, c, entry);
                }
            }
            m
        }
    }
}

/// stratum of an extension class under the rank of its composition matrix.
/// parameters of the rational-normal locus are normalized to a primitive
/// integer pair whose first nonzero entry is positive.
#[derive(Debug, Clone, PartialEq)]
pub enum Stratum {
    Zero,
    RationalNormalLocus(Rat, Rat),
    ExceptionalLocus,
    Generic,
}

/// scale a parameter pair to the canonical representative of its
/// projective class: primitive integers, first nonzero entry positive.
pub fn normalize_param_pair(p0: &Rat, p1: &Rat) -> (Rat, Rat) {
    assert!(!p0.is_zero() || !p1.is_zero(), "cannot normalize the zero pair");
    let lead = if p0.is_zero() { p1 } else { p0 };
    let mut v0 = p0 / lead;
    let mut v1 = p1 / lead;
    // clear denominators and common factors
    let denom = v0.denom() * v1.denom() / num_integer::gcd(v0.denom().clone(), v1.denom().clone());
    v0 *= Rat::from_integer(denom.clone());
    v1 *= Rat::from_integer(denom);
    let g = num_integer::gcd(v0.numer().abs(), v1.numer().abs());
    if !g.is_zero() {
        let g = Rat::from_integer(g);
        v0 /= g.clone();
        v1 /= g;
    }
    (v0, v1)
}

/// classify an extension class by the rank of its composition matrix and
/// recover the parameters on the rank <= 1 strata.
pub fn rank_stratify(xi: &XiClass) -> Stratum {
    if xi.is_zero() {
        return Stratum::Zero;
    }
    let m = xi_composition_matrix(xi);
    if m.rank() == 2 {
        return Stratum::Generic;
    }
    match xi.scenario {
        Scenario::Single { .. } => {
            // kernel vector (x_{e1}, x_{e0}) spans the direction
            // b0*e1 - b1*e0; the locus parameters are (x_{e1}, -x_{e0})
            let k = m.kernel_basis();
            assert_eq!(k.len(), 1, "rank-one matrix with two columns has a line kernel");
            let (b0, b1) = normalize_param_pair(&k[0][0], &(-k[0][1].clone()));
            Stratum::RationalNormalLocus(b0, b1)
        }
        Scenario::Chain { n1, n2 } => {
            let c_part = &xi.coeffs[(n1 - 1) as usize..];
            debug_assert_eq!(c_part.len(), (n2 - 1) as usize);
            if c_part.iter().all(|c| c.is_zero()) {
                // kernel spanned by 0 + f0: the exceptional directions
                return Stratum::ExceptionalLocus;
            }
            // kernel vector (x_glued, x_{f0}) spans mu*(glued) - lambda*(0+f0)
            let k = m.kernel_basis();
            assert_eq!(k.len(), 1, "rank-one matrix with two columns has a line kernel");
            let (lambda, mu) = normalize_param_pair(&(-k[0][1].clone()), &k[0][0]);
            Stratum::RationalNormalLocus(lambda, mu)
        }
    }
}

/// the extension class killed by composing with the degree-one section
/// b1*e0 - b0*e1 on single(n): the kernel of the bidiagonal matrix with
/// -b0 on the diagonal and b1 on the superdiagonal, which is the class
/// with coordinates a_i = b0^i b1^{n-1-i} up to scale.
pub fn glued_locus_kernel(b0: &Rat, b1: &Rat, n: i64) -> XiClass {
    assert!(!b0.is_zero() || !b1.is_zero(), "needs a nonzero parameter pair");
    let rows = (n - 1) as usize;
    let mut m = QMatrix::zero(rows, n as usize);
    for r in 0..rows {
        m.set(r, r, -b0.clone());
        m.set(r, r + 1, b1.clone());
    }
    let k = m.kernel_basis();
    assert_eq!(k.len(), 1, "the bidiagonal matrix has a one-dimensional kernel");
    XiClass::new(Scenario::Single { n }, k[0].clone())
}

/// the chain extension class on the rank <= 1 locus with parameters
/// (lambda, mu): first-branch coordinates zero, glued coordinate
/// lambda^{n2-1}, and c_j = lambda^{n2-1-j} mu^j.
pub fn chain_locus_xi(lambda: &Rat, mu: &Rat, n1: i64, n2: i64) -> XiClass {
    let mut coeffs = vec![Rat::zero(); (n1 - 2) as usize];
    for j in 0..n2 {
        let mut c = Rat::one();
        for _ in 0..(n2 - 1 - j) {
            c *= lambda;
        }
        for _ in 0..j {
            c *= mu;
        }
        coeffs.push(c);
    }
    XiClass::new(Scenario::Chain { n1, n2 }, coeffs)
}

/// dimension bookkeeping of the four-term exact sequence relating the
/// self-extensions of the extension object to the kernel of the
/// composition map: dim ext1 = (dim ext2 - 1) + dim kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ext1Dims {
    pub ext2_dim: usize,
    pub kernel_dim: usize,
    pub ext1_dim: usize,
}

pub fn ext1_long_sequence_dims(xi: &XiClass) -> Ext1Dims {
    assert!(!xi.is_zero(), "needs a nonzero extension class");
    let ext2_dim = xi.coeffs.len();
    let kernel_dim = 2 - xi_composition_matrix(xi).rank();
    Ext1Dims { ext2_dim, kernel_dim, ext1_dim: ext2_dim - 1 + kernel_dim }
}

/// the dictionary from basis monomials to Cech cochains on the chain
/// model. a monomial of bidegree (a, b) lifts to the rational monomial
/// x^alpha u^beta on the surface; the cochain component in each chart is
/// that monomial times the local equation of the twisting divisor
/// a*C2 + (a*n2 + b)*L, placed in both rows of the two-term resolutions.
pub fn chain_hom_cochain(model: &ToricModel, m: &ChainMono) -> CechElement {
    let mut components = BTreeMap::new();
    for (i, mult) in chain_hom_multipliers(model, m).into_iter().enumerate() {
        components.insert((vec![i], 0i64, 0i64), vec![vec![mult.clone()]]);
        components.insert((vec![i], -1i64, -1i64), vec![vec![mult]]);
    }
    CechElement { components }.normalize()
}

/// the dictionary cochain spread over every overlap: a global section
/// restricts to each overlap as its leading chart's multiplier. use this
/// form to compose with cochains living at positive levels.
pub fn chain_hom_cochain_extended(model: &ToricModel, m: &ChainMono) -> CechElement {
    let mults = chain_hom_multipliers(model, m);
    let mut components = BTreeMap::new();
    for ov in model.overlaps() {
        let mult = mults[ov[0]].clone();
        components.insert((ov.clone(), 0i64, 0i64), vec![vec![mult.clone()]]);
        components.insert((ov, -1i64, -1i64), vec![vec![mult]]);
    }
    CechElement { components }.normalize()
}

fn chain_hom_multipliers(model: &ToricModel, m: &ChainMono) -> Vec<LaurentElement> {
    let ModelTag::Chain { n1, n2 } = model.tag else {
        panic!("the hom dictionary needs the chain model")
    };
    let (alpha, beta) = match (m.e0, m.f0) {
        (Some(0), Some(0)) => (m.a, 0),
        (Some(i), None) => (m.a - i, 0),
        (None, Some(j)) => (m.a + n1 * j, j),
        _ => panic!("not a basis monomial"),
    };
    let tw = Divisor { curve_coeffs: vec![0, m.a], l_coeff: m.a * n2 + m.b };
    let s0 = LaurentElement::monomial(&model.charts[0], &[alpha, beta], Rat::one());
    (0..model.ncharts())
        .map(|i| {
            let si = if i == 0 { s0.clone() } else { model.transport(&s0, 0, i) };
            let eq = model.divisor_equation(&tw, i);
            let mult = si.mul(&LaurentElement::monomial(&model.charts[i], &eq, Rat::one()));
            let all_vars: Vec<usize> = (0..model.charts[i].nvars()).collect();
            assert!(
                mult.regular_in(&all_vars),
                "monomial {} of bidegree ({}, {}) leaves the dictionary range in chart {i}",
                m.render(),
                m.a,
                m.b
            );
            mult
        })
        .collect()
}
