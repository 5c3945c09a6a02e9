//! Minimal dense-key polynomial arithmetic used to cross-check the library.
//! Only the field `Coeff` is shared; everything else is re-derived here.
#![allow(dead_code)]

use std::collections::BTreeMap;

use jolt_core::polycore::{Coeff, Poly};

#[derive(Clone, Debug, PartialEq)]
pub struct P {
    pub nv: usize,
    pub t: BTreeMap<Vec<u32>, Coeff>,
}

impl P {
    pub fn zero(nv: usize) -> Self {
        P { nv, t: BTreeMap::new() }
    }

    pub fn constant(nv: usize, c: Coeff) -> Self {
        let mut p = P::zero(nv);
        p.push(vec![0; nv], c);
        p
    }

    pub fn var(nv: usize, i: usize) -> Self {
        let mut e = vec![0; nv];
        e[i] = 1;
        let mut p = P::zero(nv);
        p.push(e, Coeff::integer(1));
        p
    }

    fn push(&mut self, e: Vec<u32>, c: Coeff) {
        let sum = match self.t.get(&e) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.t.remove(&e);
        } else {
            self.t.insert(e, sum);
        }
    }

    pub fn from_lib(p: &Poly<Coeff>) -> Self {
        let mut out = P::zero(p.nvars());
        for (m, c) in p.terms() {
            out.push(m.exps().iter().map(|&x| x as u32).collect(), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_empty()
    }

    pub fn add(&self, o: &P) -> P {
        let mut out = self.clone();
        for (e, c) in &o.t {
            out.push(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> P {
        P { nv: self.nv, t: self.t.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &P) -> P {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Coeff) -> P {
        let mut out = P::zero(self.nv);
        for (e, c) in &self.t {
            out.push(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, o: &P) -> P {
        let mut out = P::zero(self.nv);
        for (e1, c1) in &self.t {
            for (e2, c2) in &o.t {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.push(e, c1 * c2);
            }
        }
        out
    }

    pub fn d(&self, i: usize) -> P {
        let mut out = P::zero(self.nv);
        for (e, c) in &self.t {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.push(e2, c * &Coeff::integer(e[i] as i64));
            }
        }
        out
    }

    pub fn eval(&self, x: &[Coeff]) -> Coeff {
        let mut acc = Coeff::integer(0);
        for (e, c) in &self.t {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    term = &term * xi;
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitute `subs[i]` for variable `i`; the result lives in `subs`' variable count.
    pub fn compose(&self, subs: &[P]) -> P {
        let nv = subs[0].nv;
        let mut out = P::zero(nv);
        for (e, c) in &self.t {
            let mut term = P::constant(nv, c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&subs[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Re-index into `nv` variables starting at `offset`.
    pub fn shift(&self, nv: usize, offset: usize) -> P {
        let subs: Vec<P> = (0..self.nv).map(|i| P::var(nv, offset + i)).collect();
        self.compose(&subs)
    }
}

/// `X = J∇H = (∂H/∂p, -∂H/∂q)` over the first `2n` variables.
pub fn field(h: &P, n: usize) -> Vec<P> {
    (0..n).map(|i| h.d(n + i)).chain((0..n).map(|i| h.d(i).neg())).collect()
}

pub fn bracket(f: &P, g: &P, n: usize) -> P {
    let mut acc = P::zero(f.nv);
    for j in 0..n {
        acc = acc.add(&f.d(j).mul(&g.d(n + j))).sub(&f.d(n + j).mul(&g.d(j)));
    }
    acc
}

/// `I + tX` where `t` is a polynomial over the same variables.
pub fn linear_map(x: &[P], t: &P) -> Vec<P> {
    x.iter().enumerate().map(|(i, xi)| P::var(t.nv, i).add(&t.mul(xi))).collect()
}

pub fn compose_maps(f: &[P], g: &[P]) -> Vec<P> {
    f.iter().map(|fi| fi.compose(g)).collect()
}

pub fn hessian_at(h: &P, x: &[Coeff], dim: usize) -> Vec<Vec<Coeff>> {
    (0..dim).map(|i| (0..dim).map(|j| h.d(i).d(j).eval(x)).collect()).collect()
}

/// `DX(x)` as a dense matrix.
pub fn dx_at(h: &P, n: usize, x: &[Coeff]) -> Vec<Vec<Coeff>> {
    let xf = field(h, n);
    (0..2 * n).map(|i| (0..2 * n).map(|j| xf[i].d(j).eval(x)).collect()).collect()
}

pub fn mat_mul(a: &[Vec<Coeff>], b: &[Vec<Coeff>]) -> Vec<Vec<Coeff>> {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r)
        .map(|i| (0..c).map(|j| (0..k).fold(Coeff::integer(0), |acc, l| &acc + &(&a[i][l] * &b[l][j]))).collect())
        .collect()
}

/// Exact rank by elimination.
pub fn rank(m: &[Vec<Coeff>]) -> usize {
    let mut a: Vec<Vec<Coeff>> = m.to_vec();
    let (rows, cols) = (a.len(), a[0].len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] * &inv;
                for j in 0..cols {
                    let v = &a[i][j] - &(&f * &a[r][j]);
                    a[i][j] = v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

impl P {
    pub fn to_lib(&self, vars: jolt_core::polycore::Vars) -> Poly<Coeff> {
        Poly::from_terms(vars, self.t.iter().map(|(e, c)| (e.iter().map(|&x| x as u16).collect(), c.clone())))
    }
}
