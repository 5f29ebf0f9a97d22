use k3glue_core::k3_lattice::{gram_matrix, picard_bound, Hyperplane, LATTICE_RANK};
use k3glue_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, LatticeParams};
use crate::report::{Cell, Section, SectionReport};

fn random_hyperplane(rng: &mut ChaCha8Rng, k: usize, bound: i64) -> Hyperplane {
    loop {
        let vs = (0..k)
            .map(|_| (0..LATTICE_RANK).map(|_| BigRational::new(BigInt::from(rng.gen_range(-bound..=bound)), BigInt::from(rng.gen_range(1..=bound)))).collect())
            .collect();
        if let Ok(h) = Hyperplane::new(vs) {
            return h;
        }
    }
}

pub fn run(p: &LatticeParams, seed: u64) -> SectionReport {
    let mut s = Section::new(Command::Lattice, seed);
    let form = gram_matrix();
    let inv = form.invariants();
    s.check(
        "gram invariants",
        inv.all_hold(),
        format!(
            "symmetric {}, even {}, det {}, signature ({}, {})",
            inv.symmetric, inv.even, inv.determinant, inv.signature.positive, inv.signature.negative
        ),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let (mut rank_ok, mut witness_ok) = (true, true);
    let bound = p.entry_bound.max(1);
    let mut hyperplanes: Vec<(String, Hyperplane)> =
        p.span_counts.iter().filter(|k| (1..=LATTICE_RANK).contains(k)).map(|&k| (format!("random k={}", k), random_hyperplane(&mut rng, k, bound))).collect();
    if let Some(spans) = &p.spans {
        if let Some(h) = s.attempt("user spans", Hyperplane::parse(spans)) {
            hyperplanes.push(("user".into(), h));
        }
    }
    for (label, h) in &hyperplanes {
        let k = h.span_vectors.len();
        let r = form.hyperplane_rank(h);
        rank_ok &= r == LATTICE_RANK - k;
        let mut witnessed = Vec::new();
        for n in [1, r] {
            if n == 0 || n > r || witnessed.contains(&n) {
                continue;
            }
            witnessed.push(n);
            match form.f_n_witness(h, n) {
                Ok(w) => witness_ok &= w.reconstruction && w.contained && w.rank_of_m == n && w.stratum_dimension == LATTICE_RANK - 1 - n,
                Err(e) => {
                    witness_ok = false;
                    s.check(format!("witness {} n={}", label, n), false, format!("{:?}", e));
                }
            }
        }
        let too_big = form.f_n_witness(h, r + 1);
        witness_ok &= matches!(too_big, Err(Error::RankTooSmall { .. }));
        rows.push(vec![label.clone().into(), k.into(), r.into()]);
    }
    s.check("hyperplane rank 22-k", rank_ok && !rows.is_empty(), format!("{} span sets", rows.len()));
    s.check("F_n witnesses", witness_ok && !rows.is_empty(), "M in L, rank n, M orthogonal to every span vector, n = r + 1 rejected");
    s.table("ranks", &["span_set", "k", "rank"], rows);

    if let Some(b) = s.attempt("picard bound", picard_bound(p.dim_t)) {
        let ok = b.rho_bound as i64 == 20 - p.dim_t && b.non_kummer_possible == (b.rho_bound < 16);
        s.check(
            "picard bound",
            ok,
            format!("rho <= {} for dim T = {}; below 16 so non-Kummer possible: {}", b.rho_bound, b.dim_t, b.non_kummer_possible),
        );
    }
    s.finish()
}
