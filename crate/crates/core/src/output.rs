//! CSV renderings of the pipeline products.
//!
//! Every file starts with optional `# `-prefixed comment lines, then a
//! header row. Floats are written with 17 significant digits so that they
//! parse back to the same bits.

use std::fmt::Write as _;

use crate::characters::DirichletCharacter;
use crate::density::{DensityReport, McEstimate};
use crate::prediction::{ComparisonRow, Kind};
use crate::sieve::ClassSums;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn start(comments: &[String], header: &str) -> String {
    let mut s = String::new();
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    s.push_str(header);
    s.push('\n');
    s
}

/// `x,a,S_omega,S_Omega`, one row per checkpoint and residue class.
pub fn checkpoints_csv(sums: &ClassSums, comments: &[String]) -> String {
    let mut s = start(comments, "x,a,S_omega,S_Omega");
    for (k, &x) in sums.checkpoints().iter().enumerate() {
        for (a, v) in sums.row(k).iter().enumerate() {
            let _ = writeln!(s, "{x},{a},{},{}", v[0], v[1]);
        }
    }
    s
}

/// `x,q,chi_index,re_psi_omega,im_psi_omega,re_psi_Omega,im_psi_Omega`.
pub fn twists_csv(sums: &ClassSums, chars: &[DirichletCharacter], comments: &[String]) -> String {
    let mut s = start(
        comments,
        "x,q,chi_index,re_psi_omega,im_psi_omega,re_psi_Omega,im_psi_Omega",
    );
    for (k, &x) in sums.checkpoints().iter().enumerate() {
        for chi in chars {
            let (w, o) = sums.twist_row(chi, k);
            let _ = writeln!(
                s,
                "{x},{},{},{},{},{},{}",
                chi.modulus(),
                chi.index(),
                fmt_f64(w.re),
                fmt_f64(w.im),
                fmt_f64(o.re),
                fmt_f64(o.im)
            );
        }
    }
    s
}

pub fn compare_file_name(kind: &str, q: u64, index: usize, t0: f64) -> String {
    format!("compare_{kind}_q{q}_chi{index}_T{t0}.csv")
}

/// `x,re_obs,im_obs,re_main,im_main,re_full,im_full,re_resid_norm,im_resid_norm`.
pub fn compare_csv(rows: &[ComparisonRow], comments: &[String]) -> String {
    let mut s = start(
        comments,
        "x,re_obs,im_obs,re_main,im_main,re_full,im_full,re_resid_norm,im_resid_norm",
    );
    for r in rows {
        let vals = [r.observed, r.main, r.full, r.resid_norm]
            .iter()
            .flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)])
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(s, "{},{vals}", r.x);
    }
    s
}

/// One mean-square value `M(Y, T0)` for a character and kind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanSquareRow {
    pub kind: Kind,
    pub q: u64,
    pub chi_index: usize,
    pub t0: f64,
    pub y: f64,
    pub m: f64,
}

/// `kind,q,chi_index,T0,Y,M`.
pub fn meansq_csv(rows: &[MeanSquareRow], comments: &[String]) -> String {
    let mut s = start(comments, "kind,q,chi_index,T0,Y,M");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.kind,
            r.q,
            r.chi_index,
            fmt_f64(r.t0),
            fmt_f64(r.y),
            fmt_f64(r.m)
        );
    }
    s
}

/// `q,chi_index,X,delta_omega,delta_Omega`, one row per checkpoint of each
/// empirical trace.
pub fn density_csv(reports: &[(u64, usize, &DensityReport)], comments: &[String]) -> String {
    let mut s = start(comments, "q,chi_index,X,delta_omega,delta_Omega");
    for &(q, idx, report) in reports {
        for &(x, w, o) in &report.trace {
            let _ = writeln!(s, "{q},{idx},{x},{},{}", fmt_f64(w), fmt_f64(o));
        }
    }
    s
}

/// `q,chi_index,y,p_neg,trials,seed`.
pub fn mc_csv(estimates: &[(u64, usize, &McEstimate)], comments: &[String]) -> String {
    let mut s = start(comments, "q,chi_index,y,p_neg,trials,seed");
    for &(q, idx, mc) in estimates {
        for (&y, &p) in mc.y.iter().zip(&mc.p) {
            let _ = writeln!(s, "{q},{idx},{},{},{},{}", fmt_f64(y), fmt_f64(p), mc.trials, mc.seed);
        }
    }
    s
}
