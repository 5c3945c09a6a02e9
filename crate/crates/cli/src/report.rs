//! Plain-text renderings of the reports.

use std::fmt::Write;

use jolt_core::classify::{ClassificationReport, Witness};
use jolt_core::factorize::JoltFactorization;
use jolt_core::hamalg::{Hamiltonian, Unitary};
use jolt_core::normalform::{SemiNormal, SimpleForm};
use jolt_core::polycore::{format_vec, Coeff, Mat, Scalar};

fn point<C: ToString>(x: &[C]) -> String {
    format!("({})", x.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

fn witness(w: &Option<Witness>) -> String {
    match w {
        None => "-".into(),
        Some(w) => {
            let pts: Vec<String> = w.points.iter().map(|p| point(p)).collect();
            format!("entry {:?} = {} at {}", w.entry, w.value, pts.join(" / "))
        }
    }
}

fn matrix<C: Scalar>(label: &str, m: &Mat<C>) -> String {
    let mut s = format!("{label}:\n");
    for row in m.to_strings() {
        let _ = writeln!(s, "  [{}]", row.join(", "));
    }
    s
}

fn unitary<C: Scalar>(u: &Unitary<C>) -> String {
    matrix("S", &u.s) + &matrix("T", &u.t)
}

pub fn classification(h: &Hamiltonian, r: &ClassificationReport) -> String {
    let mut s = String::new();
    let mut row = |k: &str, v: String| {
        let _ = writeln!(s, "{k:<20} {v}");
    };
    row("hamiltonian", h.poly().to_string());
    row("n", r.n.to_string());
    row("degrees", format!("{:?}", r.degrees));
    row("mode", r.mode.to_string());
    row("symplectic_flow", r.symplectic_flow.to_string());
    row("affine_integrable", r.affine_integrable.to_string());
    if !r.affine_integrable && !r.affine_residual.is_empty() {
        row("(DX)X", format!("({})", r.affine_residual.join(", ")));
    }
    row("dx_squared_zero", r.dx_squared_zero.to_string());
    row("regular", format!("{} {}", r.regular, r.regular_witness.as_deref().map(point).unwrap_or_default()));
    row(
        "nondegenerate",
        format!("{} rank {} {}", r.nondegenerate, r.rank, r.nondegenerate_witness.as_deref().map(point).unwrap_or_default()),
    );
    row("shear", r.shear.to_string());
    row("shear_witness", witness(&r.shear_witness));
    row("triple_nilpotent", r.triple_nilpotent.to_string());
    row("triple_witness", witness(&r.triple_witness));
    if let Some(b) = r.failure_bound {
        row("failure_bound", format!("{b:.3e}"));
    }
    for note in &r.notes {
        row("note", note.clone());
    }
    s
}

pub fn seminormal(r: &SemiNormal<Coeff>) -> String {
    let mut s = format!("point: {}\n", point(&r.point));
    s += &matrix("zeta", &r.zeta);
    s += &matrix("theta", &r.theta);
    s += &unitary(&r.u);
    let _ = writeln!(s, "residual_z: {:.3e}\nresidual_b: {:.3e}\nB = Z zeta: {}", r.residual_z, r.residual_b, r.b_equals_z_zeta);
    s
}

pub fn simple_form<C: Scalar>(f: &SimpleForm<C>, arithmetic: &str) -> String {
    let mut s = format!("n: {}\nd: {}\npath: {:?} ({arithmetic})\n", f.n, f.d, f.path);
    let _ = writeln!(s, "K: {}\nV: {}\nW: {}", f.k, format_vec(&f.v), format_vec(&f.w));
    s += &unitary(&f.u);
    let _ = writeln!(s, "residual: {:.3e}\nintegrability: {}", f.residual, f.integrability_holds(1e-9));
    s
}

pub fn factorization<C: Scalar>(j: &JoltFactorization<C>) -> String {
    let mut s = format!("n: {}\nd: {}\n", j.n, j.d);
    let _ = writeln!(s, "H1∘U: {}\nH2∘U: {}\nH3∘U: {}", j.split.h1, j.split.h2, j.split.h3);
    let _ = writeln!(s, "H1: {}\nH4: {}", j.h1u, j.h4u);
    let _ = writeln!(s, "F1: {}\nF4: {}", format_vec(&j.f1), format_vec(&j.f4));
    let _ = writeln!(s, "h1(p) = H1(p,p): {}\nh4(p) = H4(p,p): {}", j.h1, j.h4);
    let _ = writeln!(s, "residual: {}", j.residual);
    s
}
