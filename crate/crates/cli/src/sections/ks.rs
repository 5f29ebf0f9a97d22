use k3glue_core::family_ks::{
    cubic_fixed_points, family_summary, fixed_locus, ks_cocycle_w, ks_cocycle_z, separation_scheme, tangent_cohomology_dims,
    tangent_cohomology_for_points, FamilyConfig, FamilyKind, Point, ProjAut, TernaryForm, MAX_CUBIC_AUTOMORPHISMS,
};
use k3glue_core::linalg::q;
use k3glue_core::surgery::GluingDatum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{shape, ClassSpec, Command, KsParams};
use crate::report::{Cell, Section, SectionReport};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn run(p: &KsParams, seed: u64) -> SectionReport {
    let mut s = Section::new(Command::Ks, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cocycles(&mut s, p, &mut rng);
    cohomology(&mut s, p, &mut rng);
    fixed_loci(&mut s, p, seed);
    s.finish()
}

fn cocycles(s: &mut Section, p: &KsParams, rng: &mut ChaCha8Rng) {
    let class_spec = p.class.clone().unwrap_or_else(ClassSpec::golden);
    let (Some(shape), Some(class)) = (s.attempt("shape", shape(p.tau.unwrap_or([0.0, 1.0]))), s.attempt("class", class_spec.parse())) else {
        return;
    };
    let g = Complex64::new(p.g_shift[0], p.g_shift[1]);
    let Some(base) = s.attempt("gluing datum", GluingDatum::new(&shape, 9, &class, p.r_outer, p.r_prime, g)) else { return };
    let fibre = FamilyConfig::at_base(FamilyKind::AnnulusW, base.clone());
    let shift = FamilyConfig::at_base(FamilyKind::TranslationZ, base.clone());
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let (mut sym_ok, mut order_ok, mut worst_sym, mut min_order) = (true, true, 0.0f64, f64::INFINITY);
    let (mut z_ok, mut worst_z) = (true, 0.0f64);
    for i in 0..p.parameter_points {
        // interior of the annulus, away from both boundary circles
        let margin = 0.05 * (p.r_prime - 1.0);
        let t0 = Complex64::from_polar(rng.gen_range(1.0 + margin..p.r_prime - margin), rng.gen_range(0.0..std::f64::consts::TAU));
        let z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let w = Complex64::from_polar(rng.gen_range(1.0 / p.r_prime..p.r_outer), rng.gen_range(0.0..std::f64::consts::TAU));
        if let Some(rep) = s.attempt(&format!("fibre cocycle {}", i), ks_cocycle_w(&fibre, t0, z, w, &p.steps)) {
            sym_ok &= rep.symbolic_error < 1e-14;
            worst_sym = worst_sym.max(rep.symbolic_error);
            let order = rep.observed_order.unwrap_or(f64::NAN);
            order_ok &= order >= p.min_order;
            min_order = min_order.min(order);
            rows.push(vec![i.into(), "w_dw".into(), t0.re.into(), t0.im.into(), rep.symbolic_error.into(), order.into(), rep.fd_errors[0].into()]);
        }
        if let Some(rep) = s.attempt(&format!("translation cocycle {}", i), ks_cocycle_z(&shift, z, w, &p.steps)) {
            // z' is affine in t, so the difference quotient is exact up to roundoff
            z_ok &= rep.symbolic_error == 0.0 && rep.holds;
            worst_z = worst_z.max(rep.fd_errors.iter().cloned().fold(0.0, f64::max));
            let order = rep.observed_order.unwrap_or(f64::NAN);
            rows.push(vec![i.into(), "dz".into(), 0.0.into(), 0.0.into(), rep.symbolic_error.into(), order.into(), rep.fd_errors[0].into()]);
        }
    }
    s.check("fibre cocycle is w_dw/t0", sym_ok && p.parameter_points > 0, format!("worst relative error {:e}", worst_sym));
    s.check(
        "fibre cocycle difference order",
        order_ok && p.parameter_points > 0,
        format!("minimum observed order {:.4} at {} points (required {})", min_order, p.parameter_points, p.min_order),
    );
    s.check("translation cocycle is d/dz", z_ok, format!("difference quotients exact to {:e}", worst_z));
    s.table("cocycles", &["point", "field", "t0_re", "t0_im", "symbolic_error", "observed_order", "fd_error"], rows);

    let combined = FamilyConfig::at_base(FamilyKind::Combined, base);
    if let Some(sum) = s.attempt("family summary", family_summary(&combined, Complex64::new(0.5 * (1.0 + p.r_prime), 0.0), &p.steps)) {
        let ok = sum.w_cocycle.as_ref().is_some_and(|r| r.holds) && sum.z_cocycle.as_ref().is_some_and(|r| r.holds) && sum.fibre_transitions_parameter_free;
        s.check("combined family", ok, format!("parameter dimension {}", sum.parameter_dimension));
    }
}

fn cohomology(s: &mut Section, p: &KsParams, rng: &mut ChaCha8Rng) {
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut ok = true;
    for &n in &p.point_counts {
        if let Some(t) = s.attempt(&format!("cohomology N={}", n), tangent_cohomology_dims(n)) {
            ok &= (t.h0, t.h1, t.h2) == (0, 2 * n - 8, 0);
            rows.push(vec![n.into(), "formula".into(), t.h0.into(), t.h1.into(), t.h2.into()]);
        }
        // exact rank at random integer points, which are general with probability one
        let pts: Vec<Vec<_>> = (0..n).map(|_| (0..3).map(|_| q(rng.gen_range(-50..=50))).collect()).collect();
        if let Some(t) = s.attempt(&format!("cohomology points N={}", n), tangent_cohomology_for_points(&pts)) {
            ok &= (t.h0, t.h1, t.h2) == (0, 2 * n - 8, 0) && t.general_four;
            rows.push(vec![n.into(), "points".into(), t.h0.into(), t.h1.into(), t.h2.into()]);
        }
    }
    s.check("tangent cohomology (0, 2N-8, 0)", ok && !rows.is_empty(), format!("{} cases", rows.len()));
    if let Some(t) = s.attempt("cohomology N=9", tangent_cohomology_dims(9)) {
        s.check("tangent cohomology N=9", (t.h0, t.h1, t.h2) == (0, 10, 0), format!("({}, {}, {})", t.h0, t.h1, t.h2));
    }
    s.table("cohomology", &["n_points", "method", "h0", "h1", "h2"], rows);
}

fn fixed_loci(s: &mut Section, p: &KsParams, seed: u64) {
    let dims = |m: [[i64; 3]; 3]| -> Option<Vec<usize>> {
        let mut d: Vec<usize> = fixed_locus(&ProjAut::integer(m).ok()?).iter().map(|x| x.dimension).collect();
        d.sort();
        Some(d)
    };
    let id = dims([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    s.check("fixed locus identity", id == Some(vec![2]), format!("component dimensions {:?}", id));
    let distinct = dims([[1, 0, 0], [0, 2, 0], [0, 0, 3]]);
    s.check("fixed locus distinct eigenvalues", distinct == Some(vec![0, 0, 0]), format!("component dimensions {:?}", distinct));
    let repeated = dims([[1, 0, 0], [0, 1, 0], [0, 0, 2]]);
    s.check("fixed locus repeated eigenvalue", repeated == Some(vec![0, 1]), format!("component dimensions {:?}", repeated));

    let Some(reflection) = s.attempt("reflection", ProjAut::integer([[1, 0, 0], [0, 1, 0], [0, 0, -1]])) else { return };
    let fermat = TernaryForm::fermat();
    if let Some(rep) = s.attempt("fermat fixed points", cubic_fixed_points(&reflection, &fermat)) {
        s.check(
            "fermat fixed points",
            rep.points.len() == 3 && !rep.infinite,
            format!("{} points, Bezout bound {}", rep.points.len(), rep.bezout_bound),
        );
    }
    s.check("automorphism bound", MAX_CUBIC_AUTOMORPHISMS == 3024, format!("{}", MAX_CUBIC_AUTOMORPHISMS));

    let base: Vec<Point> = (0..9)
        .map(|k| {
            let y = 0.13 * k as f64 + 0.05;
            [c(1.0), c(y), c(-(1.0 + y * y * y).cbrt())]
        })
        .collect();
    if let Some(rep) = s.attempt("separation", separation_scheme(&[ProjAut::identity(), reflection], &fermat, &base, p.separation_samples, seed)) {
        s.check(
            "separation radii",
            rep.violations == 0 && rep.radii.iter().all(|r| *r > 0.0),
            format!("{} violations, smallest radius {:e}", rep.violations, rep.radii.iter().cloned().fold(f64::INFINITY, f64::min)),
        );
    }
}
