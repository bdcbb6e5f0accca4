//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Built with `harness = false` so the report is always
//! printed, in order, whatever the test runner's capture settings.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pibi::catalog::n_min;
use pibi::dicke::{min_eigenvalue_only, spin_matrix, ThetaScan};
use pibi::linalg::unitary_exp;
use pibi::nongauss::{
    extremal_state, optimize_kurtosis, wigner_at, wigner_function, wigner_negativity,
    KurtosisSearch, MultipoleDecomposition, SphereGrid, WignerField,
};
use pibi::oat::{
    closed_form_moment, correlator_point, directions_from_angles, min_purity, optimize_angles,
    AngleSearch, BellEvaluator, OatParams, VIOLATION_TOL,
};
use pibi::oracle::full_space_oracle;
use pibi::sdp::{
    canonical_angles, constrained_membership_sdp, extract_certificate, membership_sdp,
    optimize_alpha_beta, optimize_directions, DirectionSearch, MomentMatrixSpec, CERTIFICATE_TOL,
};
use pibi::{
    bell_operator, builtin_catalog, family, optimize_theta, verify_classical_bound, DickeSpace,
    Direction, Partition,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (
        e < limit,
        format!("{:.1}s of {}s", e.as_secs_f64(), limit.as_secs()),
    )
}

fn random_direction(rng: &mut StdRng) -> Direction {
    let z: f64 = rng.gen_range(-1.0..1.0);
    Direction::from_angles(rng.gen_range(0.0..2.0 * PI), z.acos())
}

// 1 ---------------------------------------------------------------------

/// Factored form of `I3` in the partition counts.
fn i3_factored(p: Partition) -> i128 {
    let (a, b, c, d) = (p.a as i128, p.b as i128, p.c as i128, p.d as i128);
    8 * (a - d) * (a - d - 1) * (3 * c + 2 * d + a - 2) + 48 * b * (c + d)
}

fn classical_validity() -> Verdict {
    let t = Instant::now();
    let mut failures = Vec::new();
    for f in builtin_catalog() {
        let r = verify_classical_bound(&f, n_min(&f)..=100);
        if let Some(row) = r.first_failure() {
            failures.push(format!("{} at N={}", f.name, row.n));
        }
    }
    let i3 = family("I3");
    let mut rng = StdRng::seed_from_u64(1);
    let mut mismatches = 0;
    for _ in 0..100_000 {
        let n = rng.gen_range(1..=400u32);
        let mut cuts = [
            rng.gen_range(0..=n),
            rng.gen_range(0..=n),
            rng.gen_range(0..=n),
        ];
        cuts.sort_unstable();
        let p = Partition::new(cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], n - cuts[2]);
        if i3.eval_partition(p) * Ratio::from(i3.denominator as i128) != Ratio::from(i3_factored(p))
        {
            mismatches += 1;
        }
    }
    let (fast, time) = within(t, Duration::from_secs(120));
    verdict(
        failures.is_empty() && mismatches == 0 && fast,
        format!("20 families valid for N ≤ 100: {}; I3 factored-form mismatches: {mismatches}/100000; {time}", if failures.is_empty() { "yes".into() } else { failures.join(", ") }),
    )
}

// 2 ---------------------------------------------------------------------

fn oracle_equivalence() -> Verdict {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut count = 0;
    // Per family: mismatching cases, and how many of them had a negative
    // full-space minimum (a violation the symmetric block would miss).
    let mut off = Vec::new();
    for f in builtin_catalog() {
        let (mut bad, mut missed) = (0, 0);
        for n in 2..=8u32 {
            for _ in 0..20 {
                let (a, b) = (random_direction(&mut rng), random_direction(&mut rng));
                let sym = min_eigenvalue_only(&bell_operator(&f, DickeSpace::new(n), &a, &b))
                    .expect("eigen");
                let full = full_space_oracle(&f, n, &a, &b).expect("oracle");
                worst = worst.max((sym - full).abs());
                count += 1;
                if (sym - full).abs() >= 1e-8 {
                    bad += 1;
                    missed += usize::from(full < 0.0 && sym >= 0.0);
                }
            }
        }
        if bad > 0 {
            off.push(format!(
                "{} {bad}/140 (violations missed: {missed})",
                f.name
            ));
        }
    }
    let (fast, time) = within(t, Duration::from_secs(300));
    verdict(
        worst < 1e-8 && fast,
        format!(
            "max |Δλ_min| = {worst:.2e} over {count} cases (tol 1e-8); families off: [{}]; {time}",
            off.join(", ")
        ),
    )
}

// 3 ---------------------------------------------------------------------

fn asymptotics() -> Verdict {
    let t = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, limit) in [("I2", -0.25), ("I3", -2.0 * 3f64.sqrt() / 9.0)] {
        let f = family(name);
        let r100 = optimize_theta(&f, 100, ThetaScan::default()).ratio;
        let r1000 = optimize_theta(&f, 1000, ThetaScan::default()).ratio;
        let rel = ((r1000 - limit) / limit).abs();
        let closer = (r1000 - limit).abs() < (r100 - limit).abs();
        pass &= rel < 0.03 && closer;
        parts.push(format!("{name}: N=100 {r100:.5}, N=1000 {r1000:.5}, limit {limit:.5}, gap {:.1}% (tol 3%), closer {closer}", 100.0 * rel));
    }
    let (fast, time) = within(t, Duration::from_secs(180));
    verdict(pass && fast, format!("{}; {time}", parts.join("; ")))
}

// 4 ---------------------------------------------------------------------

/// Collective spin along `u` built directly from the ladder matrix elements,
/// with basis index `a` holding `m = j − a`.
fn dense_spin(n: u32, u: &Direction) -> Vec<Vec<C64>> {
    let d = n as usize + 1;
    let j = n as f64 / 2.0;
    let mut s = vec![vec![C64::new(0.0, 0.0); d]; d];
    for a in 0..d {
        let m = j - a as f64;
        s[a][a] = C64::new(u.z * m, 0.0);
        if a > 0 {
            // ⟨m+1| S+ |m⟩, row a−1 holds m+1.
            let up = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
            // S_x = (S+ + S−)/2, S_y = (S+ − S−)/(2i).
            s[a - 1][a] += C64::new(u.x / 2.0, -u.y / 2.0) * up;
            s[a][a - 1] += C64::new(u.x / 2.0, u.y / 2.0) * up;
        }
    }
    s
}

fn direct_oat_state(n: u32, mu: f64) -> Vec<C64> {
    let j = n as f64 / 2.0;
    let mut binom = 1.0f64;
    let mut out = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        if k > 0 {
            binom *= (n - k + 1) as f64 / k as f64;
        }
        let m = j - k as f64;
        out.push(C64::from_polar(
            (binom / 2f64.powi(n as i32)).sqrt(),
            -m * m * mu / 2.0,
        ));
    }
    out
}

fn oat_moments() -> Verdict {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=20u32);
        let mu = rng.gen_range(0.0..2.0 * PI);
        let u = random_direction(&mut rng);
        let psi = direct_oat_state(n, mu);
        let s = dense_spin(n, &u);
        let mut v = psi.clone();
        for k in 1..=4u8 {
            v = (0..v.len())
                .map(|r| (0..v.len()).map(|c| s[r][c] * v[c]).sum())
                .collect();
            let direct: C64 = psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            let closed = closed_form_moment(n, mu, &u, k);
            worst = worst.max((direct.re - closed).abs()).max(direct.im.abs());
        }
    }
    verdict(
        worst < 1e-9,
        format!("max |Δ| = {worst:.2e} over 100 samples × orders 1-4 (tol 1e-9)"),
    )
}

// 5 ---------------------------------------------------------------------

const WINDOW_N: u32 = 50;

fn oat_ratio(name: &str, mu: f64) -> f64 {
    optimize_angles(
        &family(name),
        OatParams::pure(WINDOW_N, mu),
        &AngleSearch::default(),
    )
    .ratio
}

fn violated(r: f64) -> bool {
    r < -VIOLATION_TOL
}

/// Bisection for the point where the optimized ratio changes sign.
fn sign_change(name: &str, mut inside: f64, mut outside: f64) -> f64 {
    while (inside - outside).abs() > 1e-4 {
        let mid = 0.5 * (inside + outside);
        if violated(oat_ratio(name, mid)) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Pinned from the first verified run.
const I2_WINDOW: (f64, f64) = (0.03059, 0.25824);
const I3_WINDOW: (f64, f64) = (0.03074, 0.29957);
const WINDOW_TOL: f64 = 1e-3;

fn window_ordering() -> Verdict {
    let grid: Vec<f64> = (0..=40).map(|i| 0.01 * i as f64).collect();
    let r2: Vec<f64> = grid.iter().map(|&m| oat_ratio("I2", m)).collect();
    let r3: Vec<f64> = grid.iter().map(|&m| oat_ratio("I3", m)).collect();
    let min2 = r2.iter().copied().fold(f64::INFINITY, f64::min);
    let min3 = r3.iter().copied().fold(f64::INFINITY, f64::min);

    let window = |name: &str, r: &[f64]| {
        let first = r
            .iter()
            .position(|&x| violated(x))
            .expect("violated somewhere");
        let last = r
            .iter()
            .rposition(|&x| violated(x))
            .expect("violated somewhere");
        let lo = if first == 0 {
            0.0
        } else {
            sign_change(name, grid[first], grid[first - 1])
        };
        let hi = sign_change(name, grid[last], grid[last + 1]);
        (lo, hi)
    };
    let w2 = window("I2", &r2);
    let w3 = window("I3", &r3);
    let contains = w3.0 <= w2.0 && w3.1 >= w2.1 && (w3.0 < w2.0 || w3.1 > w2.1);

    let mut eta_ok = true;
    let mut etas = Vec::new();
    let search = AngleSearch::default();
    for mu in [0.05, 0.1, 0.15, 0.2, 0.25] {
        let (e2, e3) = (
            min_purity(&family("I2"), WINDOW_N, mu, &search),
            min_purity(&family("I3"), WINDOW_N, mu, &search),
        );
        if let (Ok(e2), Ok(e3)) = (e2, e3) {
            eta_ok &= e3 <= e2 + 1e-4;
            etas.push(format!("μ={mu}: {e3:.4} vs {e2:.4}"));
        }
    }
    let pinned = |w: (f64, f64), p: (f64, f64)| {
        (w.0 - p.0).abs() < WINDOW_TOL && (w.1 - p.1).abs() < WINDOW_TOL
    };
    let regress = pinned(w2, I2_WINDOW) && pinned(w3, I3_WINDOW);
    verdict(
        contains && min3 < min2 && eta_ok && !etas.is_empty() && regress,
        format!(
            "windows I3 ({:.5}, {:.5}) ⊃ I2 ({:.5}, {:.5}): {contains}; min ratio I3 {min3:.4} < I2 {min2:.4}; η_min I3 vs I2 [{}]; pinned within {WINDOW_TOL}: {regress}",
            w3.0,
            w3.1,
            w2.0,
            w2.1,
            etas.join(", ")
        ),
    )
}

// 6 ---------------------------------------------------------------------

fn sdp_example() -> Verdict {
    let t = Instant::now();
    let (n, mu) = (50, 0.2);
    let spec = MomentMatrixSpec::build(n).expect("spec");
    let dirs = optimize_directions(n, mu, &DirectionSearch::default()).expect("direction search");
    let angles = canonical_angles(n, mu, dirs.angles);
    let (a, b) = directions_from_angles(&angles);
    let point = correlator_point(n, mu, &a, &b, 3);
    let free = membership_sdp(&spec, &point).expect("sdp").lambda_star;
    let ab = optimize_alpha_beta(&spec, &point, 36).expect("α/β scan");
    let ratio = ab.weights.ratio();
    let target = 41.0 / 59.0;
    let outcome = constrained_membership_sdp(&spec, &point, ab.weights).expect("constrained sdp");
    let (cert_ok, detail) = match extract_certificate(&outcome) {
        Ok(c) => {
            let mut coeffs = c.coefficients();
            if let Some(r) = c.combined_coefficient_rescaled(59.0) {
                *coeffs.last_mut().expect("nonempty") = r;
            }
            let reference = [1.0, -0.0055, -0.0141, 0.0046, 0.0099, 0.0051, -56.1412];
            let shown: Vec<String> = coeffs.iter().map(|x| format!("{x:.4}")).collect();
            let diff = coeffs
                .iter()
                .zip(reference)
                .map(|(x, p)| (x - p).abs())
                .fold(0.0, f64::max);
            (
                c.min_vertex_value >= -CERTIFICATE_TOL && c.value_at_point < 0.0,
                format!(
                    "certificate min over partitions {:.2e}, value at point {:.4}; c = ({}) vs reference, max |Δ| {diff:.4} (logged only)",
                    c.min_vertex_value,
                    c.value_at_point,
                    shown.join(", ")
                ),
            )
        }
        Err(e) => (false, format!("no certificate: {e}")),
    };
    let ratio_ok = ((ratio - target) / target).abs() < 0.05;
    let (fast, time) = within(t, Duration::from_secs(600));
    verdict(
        free < 1.0 && ratio_ok && cert_ok && fast,
        format!("λ* = {free:.6}; α/β = {ratio:.4} vs 41/59 = {target:.4} (tol 5%); constrained λ* = {:.6}; {detail}; {time}", outcome.lambda_star),
    )
}

// 7 ---------------------------------------------------------------------

fn i4_state() -> Verdict {
    let s = extremal_state(&family("I4"), 50, ThetaScan::default()).expect("extremal state");
    let k = optimize_kurtosis(&s.psi, KurtosisSearch::default())
        .expect("kurtosis")
        .value;
    let m = MultipoleDecomposition::from_state(&s.psi).expect("multipoles");
    let (neg, converged) = match wigner_negativity(&m, &SphereGrid::for_parties(50)) {
        Ok(w) => (w.value, w.change < 1e-3),
        Err(_) => (f64::NAN, false),
    };
    // The angles of `theta_directions`: setting 0 along z, setting 1 at θ in the xz plane.
    let angles = [0.0, 0.0, 0.0, s.theta];
    let i2 = BellEvaluator::for_state(&family("I2"), s.psi.clone(), 1.0).ratio(&angles);
    let pass = (s.ratio + 0.1390).abs() <= 0.001
        && (k + 1.94).abs() <= 0.02
        && (neg - 1.41).abs() <= 0.02
        && converged
        && i2 >= 0.0;
    verdict(
        pass,
        format!(
            "I4 ratio {:.5} (−0.1390 ± 0.001); kurtosis {k:.4} (−1.94 ± 0.02); negativity {neg:.4} (1.41 ± 0.02), converged {converged}; I2 ratio at the same angles {i2:.4} (≥ 0)",
            s.ratio
        ),
    )
}

// 8 ---------------------------------------------------------------------

fn random_state(rng: &mut StdRng, n: u32) -> Vec<C64> {
    let v: Vec<C64> = (0..=n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn rodrigues(axis: &Direction, alpha: f64, v: &Direction) -> Direction {
    let (c, s) = (alpha.cos(), alpha.sin());
    let d = axis.dot(v);
    let cross = (
        axis.y * v.z - axis.z * v.y,
        axis.z * v.x - axis.x * v.z,
        axis.x * v.y - axis.y * v.x,
    );
    Direction::new(
        v.x * c + cross.0 * s + axis.x * d * (1.0 - c),
        v.y * c + cross.1 * s + axis.y * d * (1.0 - c),
        v.z * c + cross.2 * s + axis.z * d * (1.0 - c),
    )
    .expect("rotation keeps unit length")
}

fn wigner_sanity() -> Verdict {
    let mut rng = StdRng::seed_from_u64(8);
    let (mut norm_err, mut rot_err) = (0.0f64, 0.0f64);
    for n in 1..=20u32 {
        let psi = random_state(&mut rng, n);
        let m = MultipoleDecomposition::from_state(&psi).expect("multipoles");
        let grid = SphereGrid::for_parties(n);
        let base = wigner_function(&m, &grid);
        norm_err = norm_err.max((base.normalization() - 1.0).abs());

        let axis = random_direction(&mut rng);
        let alpha = rng.gen_range(0.0..2.0 * PI);
        let u = unitary_exp(&spin_matrix(DickeSpace::new(n), &axis).to_dense(), alpha)
            .expect("rotation");
        let rotated: Vec<C64> = (0..psi.len())
            .map(|i| (0..psi.len()).map(|j| u[(i, j)] * psi[j]).sum())
            .collect();
        let m1 = MultipoleDecomposition::from_state(&rotated).expect("multipoles");
        let values = base
            .rows()
            .map(|(th, ph, _)| {
                let (p, t) = rodrigues(&axis, alpha, &Direction::from_angles(ph, th)).angles();
                wigner_at(&m1, t, p)
            })
            .collect();
        let moved = WignerField {
            values,
            ..base.clone()
        };
        rot_err = rot_err.max((moved.negativity() - base.negativity()).abs());
    }
    verdict(
        norm_err < 1e-8 && rot_err < 1e-6,
        format!("N = 1..20: max normalization error {norm_err:.2e} (tol 1e-8), max negativity change under rotation {rot_err:.2e} (tol 1e-6)"),
    )
}

// 9 ---------------------------------------------------------------------

const CURVE_NS: [u32; 11] = [4, 8, 12, 16, 24, 32, 48, 64, 100, 152, 200];

/// Ratios at [`CURVE_NS`], pinned from the first verified run.
const CURVES: &[(&str, [f64; 11])] = &[
    (
        "I3",
        [
            -0.07063586275432382,
            -0.08090079053004369,
            -0.10983877891200916,
            -0.13202794278800453,
            -0.16343079715527076,
            -0.18495292092244547,
            -0.2133851196469144,
            -0.23191806803839377,
            -0.2577378302393751,
            -0.2787127373853369,
            -0.290826009822194,
        ],
    ),
    (
        "I3_1",
        [
            -0.00000000000000119538367506253,
            -0.01137357161269116,
            -0.03072968536740441,
            -0.04399115841930017,
            -0.061145120369215135,
            -0.07202011617384685,
            -0.08545496619534579,
            -0.09369361924116398,
            -0.10453719393268325,
            -0.11282796567160755,
            -0.117411673726099,
        ],
    ),
    (
        "I3_2",
        [
            -0.0000000000000024548747430236064,
            -0.012078680726672099,
            -0.03142173601755154,
            -0.044555504692700226,
            -0.061570772537257644,
            -0.07238723755066827,
            -0.08576914988914351,
            -0.09397720811478655,
            -0.10477380739329185,
            -0.11302022537612319,
            -0.11757611895438874,
        ],
    ),
    (
        "I3_3",
        [
            -0.0000000000000025576085658376153,
            -0.02154242576016237,
            -0.062378570260169526,
            -0.0922300479292681,
            -0.13313857291204034,
            -0.16037925868425298,
            -0.19541437942629045,
            -0.21767889695812176,
            -0.24795610486198694,
            -0.27192473512088317,
            -0.2855136245737044,
        ],
    ),
    (
        "I3_4",
        [
            -0.0000000000000016461600236099998,
            -0.018508823891014072,
            -0.04307993938513231,
            -0.05697861708143839,
            -0.07298250868153285,
            -0.08242457853865436,
            -0.09367811513925335,
            -0.10047134931526287,
            -0.10940785481187171,
            -0.1163122677717614,
            -0.12018140983259264,
        ],
    ),
    (
        "I3_5",
        [
            -0.0000000000000025330848970460563,
            -0.02551689392886383,
            -0.04417614851923775,
            -0.05631914108006161,
            -0.07145641422586142,
            -0.08081715061801023,
            -0.09224619103745767,
            -0.09923601099224641,
            -0.10848240533039988,
            -0.11563565086084812,
            -0.1196386311457721,
        ],
    ),
    (
        "I3_6",
        [
            -0.0000000000000014812987361709607,
            -0.030360746062595707,
            -0.04951899763096003,
            -0.061343598624722356,
            -0.07567988081396956,
            -0.08440975701483461,
            -0.09500103577121206,
            -0.10147154665870169,
            -0.11005874685444611,
            -0.11674765723689194,
            -0.12051584395309425,
        ],
    ),
    (
        "I3_7",
        [
            -0.0000000000000022916124718574725,
            -0.0438573735717917,
            -0.08434026123946231,
            -0.11284749569034475,
            -0.15070715467776327,
            -0.1754609913649572,
            -0.20710811040976215,
            -0.22723742801614394,
            -0.2547680789287199,
            -0.2767736629540044,
            -0.2893590321642751,
        ],
    ),
    (
        "I3_8",
        [
            -0.0000000000000021252641938601837,
            -0.04905709273963617,
            -0.08975750144810087,
            -0.11793180595207359,
            -0.1550496245754922,
            -0.17919511891242307,
            -0.21000295856188736,
            -0.22960033740053234,
            -0.25644675633559894,
            -0.27796475966245204,
            -0.2903016980008324,
        ],
    ),
    (
        "I3_9",
        [
            -0.07437282237039256,
            -0.08901525375625989,
            -0.11661331847603136,
            -0.13797514003896033,
            -0.168222899067634,
            -0.18896189971418925,
            -0.2164136500290047,
            -0.23436018981156898,
            -0.2594511901655717,
            -0.27991961816459876,
            -0.2917780477030938,
        ],
    ),
    (
        "I3_10",
        [
            -0.0000000000000012190675205847453,
            -0.01586850598398706,
            -0.03511953728005201,
            -0.04862447688022731,
            -0.06565831370239478,
            -0.07616443257338776,
            -0.08889232712872394,
            -0.09660166658481922,
            -0.10669304578983396,
            -0.11440489734471637,
            -0.11868041946377424,
        ],
    ),
    (
        "I3_11",
        [
            -0.0000000000000021162820859104983,
            -0.011788879786178964,
            -0.03987982815782809,
            -0.0671078568715722,
            -0.10886281533880744,
            -0.13829318707770782,
            -0.1772580235954729,
            -0.20238840165255728,
            -0.2366951649842433,
            -0.2637435673691553,
            -0.27896319747073267,
        ],
    ),
    (
        "I3_12",
        [
            -0.0000000000000019697533340568035,
            -0.007508849060740909,
            -0.02060538987309168,
            -0.03216988949068131,
            -0.049413877038289804,
            -0.06132585351090107,
            -0.0767362791534669,
            -0.08641987983918431,
            -0.09926791855989305,
            -0.10905914140659478,
            -0.11442352233176124,
        ],
    ),
    (
        "I3_13",
        [
            -0.0000000000000010584160148059405,
            -0.0000000000000021423731697568612,
            -0.02219860549881229,
            -0.037420207232874675,
            -0.05597541454462867,
            -0.06751835350756137,
            -0.08180584749993178,
            -0.09062340268255913,
            -0.10228284248503904,
            -0.11120376449423726,
            -0.11612174147633501,
        ],
    ),
    (
        "I3_14",
        [
            -0.0000000000000017407590934910417,
            -0.000000000000003391276032962068,
            -0.021305527842887393,
            -0.04500325936489669,
            -0.0844594699074036,
            -0.1143001193917729,
            -0.15581816700888398,
            -0.1835138029495838,
            -0.22207681481849562,
            -0.252777146623254,
            -0.27004808449524037,
        ],
    ),
    (
        "I3_15",
        [
            -0.0000000000000017675782609680766,
            -0.000000000000003005756800056442,
            -0.01058287028472744,
            -0.02101107717142631,
            -0.03761132812692596,
            -0.04985564275733352,
            -0.06658515465609471,
            -0.07753870556173612,
            -0.09245771162954704,
            -0.10399760607843404,
            -0.11033263470748007,
        ],
    ),
    (
        "I3_16",
        [
            -0.11849017586572248,
            -0.02208781008644726,
            -0.008656963533389796,
            -0.009882244553849525,
            -0.01280711738318821,
            -0.014645055497577993,
            -0.017558126029839645,
            -0.019886076971990917,
            -0.023727855998866083,
            -0.027328427805911847,
            -0.029582357719931344,
        ],
    ),
    (
        "I3_17",
        [
            -0.21643356565290447,
            -0.03482974250581788,
            -0.016475142786794936,
            -0.020561772578293815,
            -0.023689283483281233,
            -0.025637043928606766,
            -0.028768574075064723,
            -0.031275283571536576,
            -0.03539293957186179,
            -0.03922973241953833,
            -0.041622966558073356,
        ],
    ),
    (
        "I4",
        [
            -0.15079277266986313,
            -0.10635697849680024,
            -0.10192252805281239,
            -0.10392846344096703,
            -0.11254858169807551,
            -0.12186718368432434,
            -0.1374213394450216,
            -0.1488241956257614,
            -0.16548063247594566,
            -0.17926945468112085,
            -0.18727240997046915,
        ],
    ),
];
const CURVE_TOL: f64 = 1e-6;

fn curves() -> Verdict {
    let scan = ThetaScan::default();
    let mut trend_fail = Vec::new();
    let mut regress_fail = Vec::new();
    let mut measured = Vec::new();
    let mut transients = Vec::new();
    for f in builtin_catalog().into_iter().filter(|f| f.name != "I2") {
        let r: Vec<f64> = CURVE_NS
            .iter()
            .map(|&n| optimize_theta(&f, n, scan).ratio)
            .collect();
        measured.push(format!(
            "{}: [{}]",
            f.name,
            r.iter()
                .map(|x| format!("{x:.8}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        let (ok, rises) = trending(&r);
        if !ok {
            trend_fail.push(f.name.clone());
        }
        if !rises.is_empty() {
            transients.push(format!(
                "{} rises at N = {rises:?} from {:.4} at N = 4",
                f.name, r[0]
            ));
        }
        match CURVES.iter().find(|(name, _)| *name == f.name) {
            Some((_, pinned)) if r.iter().zip(pinned).all(|(a, b)| (a - b).abs() < CURVE_TOL) => {}
            _ => regress_fail.push(f.name.clone()),
        }
    }
    if !regress_fail.is_empty() {
        for m in &measured {
            println!("    {m}");
        }
    }
    verdict(
        trend_fail.is_empty() && regress_fail.is_empty(),
        format!(
            "{} families over N = {CURVE_NS:?}; not settling: {trend_fail:?}; small-N transients: [{}]; off the pinned values (tol {CURVE_TOL}): {regress_fail:?}",
            measured.len(),
            transients.join("; ")
        ),
    )
}

/// Finite-size transients may rise up to this party number.
const TRANSIENT_N: u32 = 16;

/// Non-increasing from [`TRANSIENT_N`] on, with the last step shorter than
/// the first, i.e. settling onto a plateau. Returns the party numbers at
/// which the ratio rose, if any.
fn trending(r: &[f64]) -> (bool, Vec<u32>) {
    let rises: Vec<u32> = (1..r.len())
        .filter(|&i| r[i] > r[i - 1])
        .map(|i| CURVE_NS[i])
        .collect();
    let start = CURVE_NS
        .iter()
        .position(|&n| n == TRANSIENT_N)
        .expect("transient bound on the grid");
    let tail = &r[start..];
    let steps: Vec<f64> = tail.windows(2).map(|w| w[1] - w[0]).collect();
    let settling = steps.iter().all(|&s| s < 0.0) && steps[steps.len() - 1].abs() < steps[0].abs();
    (settling && rises.iter().all(|&n| n <= TRANSIENT_N), rises)
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("classical validity", classical_validity),
        ("oracle equivalence", oracle_equivalence),
        ("asymptotic violations", asymptotics),
        ("OAT moment formulas", oat_moments),
        ("OAT window ordering at N=50", window_ordering),
        ("SDP example", sdp_example),
        ("I4 extremal state", i4_state),
        ("Wigner sanity", wigner_sanity),
        ("ratio-vs-N curves", curves),
    ];
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let v = run();
        println!(
            "criterion {} {} ({name}): {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {failed} criteria failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
