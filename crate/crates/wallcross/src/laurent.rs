//! weight-graded multivariate Laurent polynomials over exact rationals.
//!
//! these are the coefficient universe for every cochain in the engine.
//! each chart coordinate carries a torus weight in Z^2; monomial weights add
//! under multiplication, which is what makes all the cohomology in later
//! modules decompose into finite pieces weight by weight.

use crate::algebra::Rat;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// torus weight in Z^2, additive under monomial multiplication.
pub type Weight = (i64, i64);

pub fn wadd(a: Weight, b: Weight) -> Weight {
    (a.0 + b.0, a.1 + b.1)
}

pub fn wneg(a: Weight) -> Weight {
    (-a.0, -a.1)
}

pub fn wscale(k: i64, a: Weight) -> Weight {
    (k * a.0, k * a.1)
}

/// a chart coordinate ring: named variables with torus weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartRing {
    pub name: String,
    pub vars: Vec<String>,
    pub weights: Vec<Weight>,
}

impl ChartRing {
    pub fn new(name: &str, vars: &[(&str, Weight)]) -> Self {
        ChartRing {
            name: name.to_string(),
            vars: vars.iter().map(|(v, _)| v.to_string()).collect(),
            weights: vars.iter().map(|&(_, w)| w).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// weight of the monomial with the given exponent vector.
    pub fn monomial_weight(&self, exps: &[i64]) -> Weight {
        exps.iter()
            .zip(&self.weights)
            .fold((0, 0), |acc, (&e, &w)| wadd(acc, wscale(e, w)))
    }

    /// the unique exponent vector of the given weight, if the weight matrix
    /// is invertible over Z (true for all charts in this crate: two
    /// variables whose weights form a determinant +-1 matrix).
    pub fn exps_of_weight(&self, w: Weight) -> Option<Vec<i64>> {
        assert_eq!(self.nvars(), 2, "weight inversion needs exactly two variables");
        let (a, c) = self.weights[0];
        let (b, d) = self.weights[1];
        let det = a * d - b * c;
        if det == 0 {
            return None;
        }
        let num0 = d * w.0 - b * w.1;
        let num1 = -c * w.0 + a * w.1;
        if num0 % det != 0 || num1 % det != 0 {
            return None;
        }
        Some(vec![num0 / det, num1 / det])
    }
}

/// Laurent polynomial in the coordinates of one chart ring.
/// no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentElement {
    pub ring: String,
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i64>, Rat>,
}

impl LaurentElement {
    pub fn zero(ring: &ChartRing) -> Self {
        LaurentElement { ring: ring.name.clone(), nvars: ring.nvars(), terms: BTreeMap::new() }
    }

    pub fn monomial(ring: &ChartRing, exps: &[i64], coeff: Rat) -> Self {
        assert_eq!(exps.len(), ring.nvars(), "exponent arity mismatch");
        let mut e = Self::zero(ring);
        if !coeff.is_zero() {
            e.terms.insert(exps.to_vec(), coeff);
        }
        e
    }

    pub fn one(ring: &ChartRing) -> Self {
        Self::monomial(ring, &vec![0; ring.nvars()], Rat::from_integer(1.into()))
    }

    /// the named variable as an element.
    pub fn var(ring: &ChartRing, name: &str) -> Self {
        let i = ring
            .vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("no variable {name} in ring {}", ring.name));
        let mut exps = vec![0i64; ring.nvars()];
        exps[i] = 1;
        Self::monomial(ring, &exps, Rat::from_integer(1.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn assert_same_ring(&self, other: &Self) {
        assert_eq!(self.ring, other.ring, "ring mismatch: {} vs {}", self.ring, other.ring);
        assert_eq!(self.nvars, other.nvars);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let cur = out.terms.remove(e).unwrap_or_else(Rat::zero) + c;
            if !cur.is_zero() {
                out.terms.insert(e.clone(), cur);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return LaurentElement { ring: self.ring.clone(), nvars: self.nvars, terms: BTreeMap::new() };
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.clone() * k;
        }
        out
    }

    /// exact product by term-by-term convolution.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        let mut out = LaurentElement { ring: self.ring.clone(), nvars: self.nvars, terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let cur = out.terms.remove(&e).unwrap_or_else(Rat::zero) + ca.clone() * cb;
                if cur.is_zero() {
                    out.terms.remove(&e);
                } else {
                    out.terms.insert(e, cur);
                }
            }
        }
        out
    }

    /// the common weight of all monomials, when homogeneous; None for 0 or
    /// inhomogeneous elements.
    pub fn weight(&self, ring: &ChartRing) -> Option<Weight> {
        assert_eq!(self.ring, ring.name);
        let mut it = self.terms.keys();
        let w = ring.monomial_weight(it.next()?);
        for e in it {
            if ring.monomial_weight(e) != w {
                return None;
            }
        }
        Some(w)
    }

    /// substitute each variable by a monomial of the target ring.
    /// `images[k]` is the exponent vector (in `target`) replacing variable k.
    pub fn substitute(&self, target: &ChartRing, images: &[Vec<i64>]) -> LaurentElement {
        assert_eq!(images.len(), self.nvars, "one image per variable required");
        let mut out = LaurentElement::zero(target);
        for (e, c) in &self.terms {
            let mut exps = vec![0i64; target.nvars()];
            for (k, &ek) in e.iter().enumerate() {
                for (j, &img) in images[k].iter().enumerate() {
                    exps[j] += ek * img;
                }
            }
            let cur = out.terms.remove(&exps).unwrap_or_else(Rat::zero) + c;
            if !cur.is_zero() {
                out.terms.insert(exps, cur);
            }
        }
        out
    }

    /// true when every exponent of every listed variable index is >= 0.
    /// used to test membership in a localization where only some variables
    /// are invertible.
    pub fn regular_in(&self, noninvertible: &[usize]) -> bool {
        self.terms.keys().all(|e| noninvertible.iter().all(|&i| e[i] >= 0))
    }

    pub fn render(&self, ring: &ChartRing) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut mon = String::new();
            for (i, &ei) in e.iter().enumerate() {
                if ei != 0 {
                    if !mon.is_empty() {
                        mon.push('*');
                    }
                    mon.push_str(&ring.vars[i]);
                    if ei != 1 {
                        mon.push_str(&format!("^{ei}"));
                    }
                }
            }
            let s = if mon.is_empty() {
                format!("{c}")
            } else if c == &Rat::from_integer(1.into()) {
                mon
            } else if c == &Rat::from_integer((-1).into()) {
                format!("-{mon}")
            } else {
                format!("{c}*{mon}")
            };
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*{}", e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
