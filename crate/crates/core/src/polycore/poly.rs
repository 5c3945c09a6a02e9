//! Sparse multivariate polynomials with graded-lexicographic term order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{Coeff, Scalar};
use crate::error::{Error, Result};

/// Default cap on the degree of substitution results.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Variable layout of a polynomial ring.
///
/// The first `2n` variables are `q1..qn, p1..pn`. Auxiliary copies of the
/// phase space follow in blocks of `2n` (printed `w1..`, `y1..`), and an
/// optional trailing flow parameter is printed `t`. With `n == 0` the
/// variables are anonymous `x1..`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vars {
    n: usize,
    count: usize,
}

const BLOCK_NAMES: [&str; 4] = ["w", "y", "u", "v"];

impl Vars {
    pub fn principal(n: usize) -> Self {
        Vars { n, count: 2 * n }
    }

    /// `blocks` copies of the phase space, plus `t` when `time` is set.
    pub fn blocks(n: usize, blocks: usize, time: bool) -> Self {
        Vars { n, count: 2 * n * blocks + usize::from(time) }
    }

    pub fn plain(count: usize) -> Self {
        Vars { n: 0, count }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn has_time(&self) -> bool {
        self.n > 0 && self.count % (2 * self.n) == 1
    }

    /// Index of the flow parameter, if present.
    pub fn time_index(&self) -> Option<usize> {
        self.has_time().then(|| self.count - 1)
    }

    /// Same layout with a trailing `t` appended.
    pub fn with_time(&self) -> Self {
        assert!(!self.has_time(), "layout already has a time variable");
        Vars { n: self.n, count: self.count + 1 }
    }

    pub fn name(&self, i: usize) -> String {
        if self.n == 0 {
            return format!("x{}", i + 1);
        }
        if Some(i) == self.time_index() {
            return "t".to_string();
        }
        let block = i / (2 * self.n);
        let r = i % (2 * self.n);
        match block {
            0 if r < self.n => format!("q{}", r + 1),
            0 => format!("p{}", r - self.n + 1),
            b => format!("{}{}", BLOCK_NAMES[(b - 1) % BLOCK_NAMES.len()], r + 1),
        }
    }

    /// Inverse of [`Vars::name`]; `None` for unknown names or indices beyond the layout.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        if name == "t" {
            return self.time_index();
        }
        let split = name.find(|c: char| c.is_ascii_digit())?;
        let (prefix, digits) = name.split_at(split);
        let k: usize = digits.parse().ok()?;
        if k == 0 {
            return None;
        }
        let idx = if self.n == 0 {
            (prefix == "x").then(|| k - 1)?
        } else {
            match prefix {
                "q" if k <= self.n => k - 1,
                "p" if k <= self.n => self.n + k - 1,
                _ => {
                    let b = BLOCK_NAMES.iter().position(|&s| s == prefix)? + 1;
                    if k > 2 * self.n {
                        return None;
                    }
                    2 * self.n * b + k - 1
                }
            }
        };
        let limit = self.count - usize::from(self.has_time());
        (idx < limit).then_some(idx)
    }
}

/// Exponent vector with cached total degree. The derived order compares
/// degree first, then exponents lexicographically (graded lex).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: Box<[u16]>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { deg, exps: exps.into_boxed_slice() }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Box<[u16]> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial { deg: self.deg + other.deg, exps }
    }

    /// Degree restricted to the given variables.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&i| self.exps[i] as u32).sum()
    }
}

/// Sparse polynomial: a map from monomials to non-zero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C> {
    vars: Vars,
    terms: BTreeMap<Monomial, C>,
}

impl Eq for Poly<Coeff> {}

impl<C: Scalar> Poly<C> {
    pub fn zero(vars: Vars) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, c: C) -> Self {
        let mut p = Poly::zero(vars);
        p.add_term(Monomial::one(vars.count()), c);
        p
    }

    pub fn one(vars: Vars) -> Self {
        Poly::constant(vars, C::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(vars: Vars, i: usize) -> Self {
        assert!(i < vars.count(), "variable index {i} out of range");
        let mut p = Poly::zero(vars);
        p.terms.insert(Monomial::var(vars.count(), i), C::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u16>, C)>>(vars: Vars, terms: I) -> Self {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.count(), "exponent vector length");
            p.add_term(Monomial::new(e), c);
        }
        p
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.count()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one(self.nvars()))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::ShapeMismatch(format!(
                "polynomials over {} and {} variables",
                self.nvars(),
                other.nvars()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.negated());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.vars));
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1.times(c2);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.plus(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Poly { vars: self.vars, terms })
    }

    pub fn neg(&self) -> Self {
        Poly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v.times(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Poly { vars: self.vars, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Poly::one(self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derive(&self, i: usize) -> Result<Self> {
        if i >= self.nvars() {
            return Err(Error::IndexOutOfRange { index: i, nvars: self.nvars() });
        }
        let mut out = Poly::zero(self.vars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.to_vec();
            exps[i] -= 1;
            out.terms.insert(Monomial::new(exps), c.times(&C::from_i64(e as i64)));
        }
        Ok(out)
    }

    /// `∂_i`, panicking on a bad index; for internal loops over known ranges.
    pub fn d(&self, i: usize) -> Self {
        self.derive(i).expect("derivative index in range")
    }

    pub fn evaluate(&self, x: &[C]) -> Result<C> {
        if x.len() != self.nvars() {
            return Err(Error::ShapeMismatch(format!(
                "point of length {} for {} variables",
                x.len(),
                self.nvars()
            )));
        }
        let maxdeg = self.degree().unwrap_or(0) as usize;
        // powers[i][k] = x_i^k, built on demand per variable
        let mut powers: Vec<Vec<C>> = vec![Vec::new(); x.len()];
        let mut total = C::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                if pw.is_empty() {
                    pw.push(C::one());
                }
                while pw.len() <= (e as usize).min(maxdeg) {
                    let next = pw.last().unwrap().times(&x[i]);
                    pw.push(next);
                }
                term = term.times(&pw[e as usize]);
            }
            total = total.plus(&term);
        }
        Ok(total)
    }

    /// Substitute `subs[i]` for variable `i`.
    pub fn compose(&self, subs: &[Poly<C>]) -> Result<Self> {
        self.compose_capped(subs, DEFAULT_DEGREE_CAP)
    }

    pub fn compose_capped(&self, subs: &[Poly<C>], cap: u32) -> Result<Self> {
        if subs.len() != self.nvars() {
            return Err(Error::ShapeMismatch(format!(
                "{} substitutions for {} variables",
                subs.len(),
                self.nvars()
            )));
        }
        let Some(first) = subs.first() else {
            return Err(Error::ShapeMismatch("no substitutions".into()));
        };
        let out_vars = first.vars;
        if subs.iter().any(|s| s.vars != out_vars) {
            return Err(Error::ShapeMismatch("substitutions over different variable sets".into()));
        }
        let sub_deg: Vec<u32> = subs.iter().map(|s| s.degree().unwrap_or(0)).collect();
        let bound = self
            .terms
            .keys()
            .map(|m| m.exps.iter().zip(&sub_deg).map(|(&e, &d)| e as u32 * d).sum::<u32>())
            .max()
            .unwrap_or(0);
        if bound > cap {
            return Err(Error::DegreeCapExceeded { degree: bound, cap });
        }
        let mut powers: Vec<Vec<Poly<C>>> = vec![Vec::new(); subs.len()];
        let mut out = Poly::zero(out_vars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(out_vars, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                if pw.is_empty() {
                    pw.push(Poly::one(out_vars));
                }
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &subs[i];
                    pw.push(next);
                }
                term = &term * &pw[e as usize];
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Split into homogeneous parts, ascending in degree.
    pub fn homogeneous_components(&self) -> Vec<(u32, Poly<C>)> {
        let mut out: Vec<(u32, Poly<C>)> = Vec::new();
        for (m, c) in &self.terms {
            match out.last_mut() {
                Some((d, p)) if *d == m.deg => {
                    p.terms.insert(m.clone(), c.clone());
                }
                _ => {
                    let mut p = Poly::zero(self.vars);
                    p.terms.insert(m.clone(), c.clone());
                    out.push((m.deg, p));
                }
            }
        }
        out
    }

    /// True for the zero polynomial and for polynomials with a single degree.
    pub fn is_homogeneous(&self) -> bool {
        self.min_degree() == self.degree()
    }

    /// Move into a larger layout, renaming variable `i` to `i + offset`.
    pub fn embed(&self, vars: Vars, offset: usize) -> Self {
        assert!(offset + self.nvars() <= vars.count(), "embedding does not fit");
        let mut out = Poly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; vars.count()];
            e[offset..offset + self.nvars()].copy_from_slice(&m.exps);
            out.terms.insert(Monomial::new(e), c.clone());
        }
        out
    }

    /// Drop variables `keep.len()..` after checking they do not occur.
    pub fn restrict(&self, vars: Vars) -> Result<Self> {
        let k = vars.count();
        let mut out = Poly::zero(vars);
        for (m, c) in &self.terms {
            if m.exps[k..].iter().any(|&e| e > 0) {
                return Err(Error::ShapeMismatch("polynomial uses dropped variables".into()));
            }
            out.terms.insert(Monomial::new(m.exps[..k].to_vec()), c.clone());
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exps[i] > 0)
    }

    /// Largest degree in the given subset of variables.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        self.terms.keys().map(|m| m.degree_in(vars)).max().unwrap_or(0)
    }

    /// Write the polynomial as `Σ m(x_S) · c_m(x_rest)` for the variable subset `S`.
    /// Keys are exponent vectors over `S` (in the order given).
    pub fn split_by(&self, subset: &[usize]) -> BTreeMap<Vec<u16>, Poly<C>> {
        let mut out: BTreeMap<Vec<u16>, Poly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u16> = subset.iter().map(|&i| m.exps[i]).collect();
            let mut rest = m.exps.to_vec();
            for &i in subset {
                rest[i] = 0;
            }
            out.entry(key)
                .or_insert_with(|| Poly::zero(self.vars))
                .terms
                .insert(Monomial::new(rest), c.clone());
        }
        out
    }

    /// Keep only the terms satisfying the predicate.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Poly {
            vars: self.vars,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Remove terms with `|c| <= tol` (no-op for exact coefficients).
    pub fn prune(&self, tol: f64) -> Self {
        if C::EXACT {
            return self.clone();
        }
        Poly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.to_f64().abs() > tol)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

}

impl Poly<Coeff> {
    pub fn to_float(&self) -> Poly<f64> {
        self.map_coeffs(|c| c.to_f64())
    }

    pub fn field_radicand(&self) -> u32 {
        self.terms.values().map(|c| c.radicand()).find(|&r| r != 0).unwrap_or(0)
    }
}

impl Poly<f64> {
    /// Rationalize coefficients with bounded denominators.
    pub fn rationalize(&self, max_den: i64) -> Poly<Coeff> {
        self.map_coeffs(|&c| Coeff::approximate(c, max_den))
    }
}

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono = format_monomial(&self.vars, m);
            let cs = c.to_string();
            let compound = cs.contains(" + ") || cs.contains(" - ");
            let term = if mono.is_empty() {
                if compound {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if c.is_one() {
                mono
            } else if c.negated().is_one() {
                format!("-{mono}")
            } else if compound {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            if first {
                write!(f, "{term}")?;
                first = false;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

fn format_monomial(vars: &Vars, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars.name(i)),
            e => parts.push(format!("{}^{}", vars.name(i), e)),
        }
    }
    parts.join("*")
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a, C: Scalar> std::ops::$tr<&'a Poly<C>> for &'a Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: &'a Poly<C>) -> Poly<C> {
                self.$try(rhs).expect("polynomial operands over the same variables")
            }
        }
        impl<C: Scalar> std::ops::$tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$try(&rhs).expect("polynomial operands over the same variables")
            }
        }
    };
}
poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl<C: Scalar> std::ops::Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::neg(self)
    }
}

impl<C: Scalar> std::ops::Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v1() -> Vars {
        Vars::principal(1)
    }

    #[test]
    fn names_round_trip() {
        let vars = Vars::blocks(2, 3, true);
        for i in 0..vars.count() {
            assert_eq!(vars.index_of(&vars.name(i)), Some(i), "{}", vars.name(i));
        }
        assert_eq!(vars.name(12), "t");
        assert_eq!(Vars::principal(2).index_of("q3"), None);
        assert_eq!(Vars::principal(2).index_of("t"), None);
    }

    #[test]
    fn product_of_variables() {
        let p = Poly::<Coeff>::var(v1(), 1);
        let sq = &p * &p;
        assert_eq!(sq.to_string(), "p1^2");
        assert_eq!(sq.degree(), Some(2));
    }

    #[test]
    fn additive_inverse_cancels() {
        let q = Poly::<Coeff>::var(v1(), 0);
        let p = Poly::<Coeff>::var(v1(), 1);
        let x = &(&q * &p) + &Poly::constant(v1(), Coeff::ratio(3, 2));
        assert!((&x + &x.scale(&Coeff::integer(-1))).is_zero());
    }

    #[test]
    fn derivative_power_rule() {
        let p = Poly::<Coeff>::var(v1(), 1).pow(3);
        assert_eq!(p.derive(1).unwrap(), Poly::var(v1(), 1).pow(2).scale(&Coeff::integer(3)));
        assert!(Poly::<Coeff>::constant(v1(), Coeff::integer(5)).derive(0).unwrap().is_zero());
        assert!(matches!(p.derive(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn composition_expands() {
        let q = Poly::<Coeff>::var(v1(), 0);
        let p = Poly::<Coeff>::var(v1(), 1);
        let f = q.pow(2);
        let g = f.compose(&[&q + &p, p.clone()]).unwrap();
        assert_eq!(g, (&q + &p).pow(2));
        assert_eq!(f.compose(&[q.clone(), p.clone()]).unwrap(), f);
    }

    #[test]
    fn composition_degree_cap() {
        let q = Poly::<Coeff>::var(v1(), 0);
        let f = q.pow(10);
        let err = f.compose_capped(&[q.pow(7), q.clone()], 64).unwrap_err();
        assert_eq!(err, Error::DegreeCapExceeded { degree: 70, cap: 64 });
    }

    #[test]
    fn evaluation() {
        let p = Poly::<Coeff>::var(v1(), 1).pow(2);
        assert_eq!(p.evaluate(&[Coeff::zero(), Coeff::integer(3)]).unwrap(), Coeff::integer(9));
        assert!(p.evaluate(&[Coeff::zero()]).is_err());
    }

    #[test]
    fn homogeneous_split() {
        let p = Poly::<Coeff>::var(v1(), 1);
        let f = &p.pow(2) + &p.pow(4);
        let parts = f.homogeneous_components();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (2, p.pow(2)));
        assert_eq!(parts[1], (4, p.pow(4)));
        assert!(Poly::<Coeff>::zero(v1()).homogeneous_components().is_empty());
        assert!(!f.is_homogeneous());
    }

    #[test]
    fn mismatched_layouts_error() {
        let a = Poly::<Coeff>::var(Vars::principal(1), 0);
        let b = Poly::<Coeff>::var(Vars::principal(2), 0);
        assert!(matches!(a.try_add(&b), Err(Error::ShapeMismatch(_))));
        assert!(matches!(a.try_mul(&b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn split_by_subset() {
        let vars = Vars::principal(2);
        let q1 = Poly::<Coeff>::var(vars, 0);
        let p2 = Poly::<Coeff>::var(vars, 3);
        let f = &(&q1 * &p2.pow(2)) + &p2.pow(3);
        let parts = f.split_by(&[0]);
        assert_eq!(parts[&vec![1]], p2.pow(2));
        assert_eq!(parts[&vec![0]], p2.pow(3));
    }
}

impl<C: Scalar> serde::Serialize for Poly<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
