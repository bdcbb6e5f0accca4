//! One function per subcommand.

use std::path::Path;

use pibi::catalog::{builtin_catalog, find_family, n_min};
use pibi::dicke::ThetaScan;
use pibi::label::CorrelatorLabel;
use pibi::nongauss::{
    extremal_state, optimize_kurtosis, wigner_function, wigner_negativity, KurtosisSearch,
    MultipoleBasis, MultipoleDecomposition, SphereGrid,
};
use pibi::oat::{
    correlator_point, directions_from_angles, min_purity, oat_vector, optimize_angles,
    optimize_angles_for, AngleSearch, BellEvaluator, OatParams,
};
use pibi::polytope::{enumerate_vertices, facet_check};
use pibi::sdp::{
    canonical_angles, constrained_membership_sdp, extract_certificate, membership_sdp,
    optimize_alpha_beta, optimize_directions, CertificateRecord, DirectionSearch, MomentMatrixSpec,
    ThirdMomentWeights,
};
use pibi::{optimize_theta, verify_classical_bound, InequalityFamily, PibiError};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::error::CliError;
use crate::output::{num, write_csv, write_json, write_raw_json};

pub fn execute(config: &RunConfig) -> Result<(), CliError> {
    match config.command {
        Command::VerifyClassical(a) => verify_classical(config, a),
        Command::Vertices(a) => vertices(config, a),
        Command::FacetCheck(a) => facets(config, a),
        Command::Violation(a) => violation(config, a),
        Command::OatScan(a) => oat_scan(config, a),
        Command::NoiseRobustness(a) => noise_robustness(config, a),
        Command::SdpMembership(a) => sdp_membership(config, a),
        Command::I4State(a) => extremal(config, a),
        Command::Nongauss(a) => nongauss(config, a),
        Command::Catalog(a) => catalog(config, a),
    }
}

fn out_path(o: &OutputArgs) -> Option<&Path> {
    o.out.as_deref()
}

fn load_family_file(path: &Path) -> Result<Vec<InequalityFamily>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| CliError::usage(format!("{}: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&text).map_err(bad)?;
    // A bare family, an array, or the output of `catalog`.
    let list = match value {
        serde_json::Value::Array(items) => items,
        serde_json::Value::Object(ref m) if m.contains_key("result") => match &m["result"] {
            serde_json::Value::Array(items) => items.clone(),
            other => vec![other.clone()],
        },
        other => vec![other],
    };
    list.into_iter()
        .map(|v| serde_json::from_value(v).map_err(bad))
        .collect()
}

fn resolve_families(
    a: &FamilyArgs,
    empty_means_all: bool,
) -> Result<Vec<InequalityFamily>, CliError> {
    if a.all || (empty_means_all && a.is_empty()) {
        return Ok(builtin_catalog());
    }
    let mut out = Vec::new();
    for name in &a.names {
        out.push(
            find_family(name).ok_or_else(|| CliError::usage(format!("unknown family `{name}`")))?,
        );
    }
    if let Some(p) = &a.family_file {
        out.extend(load_family_file(p)?);
    }
    Ok(out)
}

fn format_or(o: &OutputArgs, default: Format) -> Format {
    o.format.unwrap_or(default)
}

fn json_only(o: &OutputArgs, what: &str) -> Result<(), CliError> {
    if o.format == Some(Format::Csv) {
        return Err(CliError::usage(format!("{what} writes JSON only")));
    }
    Ok(())
}

fn verify_classical(config: &RunConfig, a: &VerifyArgs) -> Result<(), CliError> {
    let families = resolve_families(&a.families, true)?;
    let reports: Vec<_> = families
        .iter()
        .map(|f| {
            let lo = a.n_min.unwrap_or_else(|| n_min(f));
            (lo, verify_classical_bound(f, lo..=a.n_max))
        })
        .collect();
    match format_or(&a.output, Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|(lo, r)| {
                    let worst = r
                        .rows
                        .iter()
                        .min_by(|x, y| x.min_value.cmp(&y.min_value))
                        .expect("nonempty N range");
                    let p = worst.argmin;
                    vec![
                        r.family.clone(),
                        lo.to_string(),
                        a.n_max.to_string(),
                        if r.pass() { "PASS" } else { "FAIL" }.into(),
                        worst.n.to_string(),
                        worst.min_value.to_string(),
                        format!("{}:{}:{}:{}", p.a, p.b, p.c, p.d),
                    ]
                })
                .collect();
            write_csv(
                out_path(&a.output),
                config,
                &[
                    "family",
                    "n_min",
                    "n_max",
                    "status",
                    "worst_n",
                    "worst_value",
                    "worst_partition",
                ],
                &rows,
            )?;
        }
        Format::Json => write_json(
            out_path(&a.output),
            config,
            &reports.iter().map(|(_, r)| r).collect::<Vec<_>>(),
        )?,
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|(_, r)| !r.pass())
        .map(|(_, r)| r.family.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "classical bound violated by {}",
            failed.join(", ")
        )))
    }
}

fn vertices(config: &RunConfig, a: &VerticesArgs) -> Result<(), CliError> {
    let set = enumerate_vertices(a.n, a.order)?;
    let labels = CorrelatorLabel::all_up_to(a.order);
    let coords = set.coordinates(&labels);
    match format_or(&a.output, Format::Csv) {
        Format::Csv => {
            let header: Vec<String> = labels.iter().map(|l| format!("S{l}")).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = coords
                .iter()
                .map(|r| r.iter().map(|v| v.to_string()).collect())
                .collect();
            write_csv(out_path(&a.output), config, &header, &rows)
        }
        Format::Json => {
            let labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
            let coords: Vec<Vec<String>> = coords
                .iter()
                .map(|r| r.iter().map(|v| v.to_string()).collect())
                .collect();
            write_json(
                out_path(&a.output),
                config,
                &json!({ "labels": labels, "vertices": coords }),
            )
        }
    }
}

fn facets(config: &RunConfig, a: &FacetArgs) -> Result<(), CliError> {
    let families = resolve_families(&a.families, false)?;
    let reports = families
        .iter()
        .map(|f| facet_check(f, a.n))
        .collect::<Result<Vec<_>, _>>()?;
    match format_or(&a.output, Format::Json) {
        Format::Json => write_json(out_path(&a.output), config, &reports)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.family.clone(),
                        r.n_parties.to_string(),
                        r.valid.to_string(),
                        r.min_value.to_string(),
                        r.tight_count.to_string(),
                        r.tight_affine_rank.to_string(),
                        r.ambient_dim.to_string(),
                        r.is_facet.to_string(),
                    ]
                })
                .collect();
            write_csv(
                out_path(&a.output),
                config,
                &[
                    "family",
                    "N",
                    "valid",
                    "min_value",
                    "tight_count",
                    "tight_affine_rank",
                    "ambient_dim",
                    "is_facet",
                ],
                &rows,
            )?;
        }
    }
    match reports.iter().find(|r| !r.valid) {
        Some(r) => Err(CliError::Validation(format!(
            "{} is violated by a vertex at N = {}",
            r.family, r.n_parties
        ))),
        None => Ok(()),
    }
}

fn violation(config: &RunConfig, a: &ViolationArgs) -> Result<(), CliError> {
    let families = resolve_families(&a.families, false)?;
    let scan = ThetaScan {
        grid: a.theta_grid,
        ..ThetaScan::default()
    };
    let mut rows = Vec::new();
    for f in &families {
        for &n in a.n.values() {
            let opt = optimize_theta(f, n, scan);
            rows.push(vec![
                f.name.clone(),
                n.to_string(),
                num(opt.theta),
                num(opt.ratio),
            ]);
        }
    }
    write_csv(
        out_path(&a.output),
        config,
        &["family", "N", "theta_star", "ratio"],
        &rows,
    )
}

fn load_certificate(path: &Path, n: u32) -> Result<CertificateRecord, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let rec: CertificateRecord = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    if let Some(cert_n) = rec.meta.get("N").and_then(|v| v.as_u64()) {
        if cert_n != n as u64 {
            return Err(CliError::usage(format!(
                "certificate was derived for N = {cert_n}, not {n}"
            )));
        }
    }
    Ok(rec)
}

fn angle_fields(angles: &[f64; 4]) -> Vec<String> {
    angles.iter().map(|x| num(*x)).collect()
}

fn oat_scan(config: &RunConfig, a: &OatScanArgs) -> Result<(), CliError> {
    let families = if a.families.is_empty() {
        Vec::new()
    } else {
        resolve_families(&a.families, false)?
    };
    let cert = a
        .certificate
        .as_deref()
        .map(|p| load_certificate(p, a.n))
        .transpose()?;
    let search = AngleSearch {
        starts: a.starts,
        ..AngleSearch::default()
    };
    let mut rows = Vec::new();
    for mu in a.mu.values() {
        let params = OatParams::new(a.n, mu, a.eta)?;
        for f in &families {
            let opt = optimize_angles(f, params, &search);
            let mut row = vec![f.name.clone(), num(mu), num(opt.ratio), num(opt.value)];
            row.extend(angle_fields(&opt.angles));
            rows.push(row);
        }
        if let Some(rec) = &cert {
            let (constant, coeffs) = rec.functional(a.n)?;
            let ev = BellEvaluator::for_functional(constant, coeffs, oat_vector(a.n, mu), a.eta);
            let opt = optimize_angles_for(&ev, &search);
            let mut row = vec![rec.name.clone(), num(mu), num(opt.ratio), num(opt.value)];
            row.extend(angle_fields(&opt.angles));
            rows.push(row);
        }
    }
    write_csv(
        out_path(&a.output),
        config,
        &[
            "family", "mu", "ratio", "value", "phi0", "theta0", "phi1", "theta1",
        ],
        &rows,
    )
}

fn noise_robustness(config: &RunConfig, a: &NoiseArgs) -> Result<(), CliError> {
    let families = resolve_families(&a.families, false)?;
    let search = AngleSearch {
        starts: a.starts,
        ..AngleSearch::default()
    };
    let mut rows = Vec::new();
    for mu in a.mu.values() {
        for f in &families {
            let eta = match min_purity(f, a.n, mu, &search) {
                Ok(eta) => num(eta),
                Err(PibiError::NoViolation) => String::new(),
                Err(e) => return Err(e.into()),
            };
            rows.push(vec![f.name.clone(), num(mu), eta]);
        }
    }
    write_csv(
        out_path(&a.output),
        config,
        &["family", "mu", "eta_min"],
        &rows,
    )
}

fn sdp_membership(config: &RunConfig, a: &SdpArgs) -> Result<(), CliError> {
    json_only(&a.output, "sdp-membership")?;
    let angles = match &a.angles {
        Some(v) => canonical_angles(a.n, a.mu, [v[0], v[1], v[2], v[3]]),
        None => optimize_directions(a.n, a.mu, &DirectionSearch::default())?.angles,
    };
    let (n_dir, m_dir) = directions_from_angles(&angles);
    let point = correlator_point(a.n, a.mu, &n_dir, &m_dir, 3);
    let spec = MomentMatrixSpec::build(a.n)?;
    let full = membership_sdp(&spec, &point)?;
    let outcome = match a.constrain {
        None => full.clone(),
        Some(Constraint::OneThirdMoment) => {
            let weights = match a.alpha_beta {
                Some(r) => {
                    let norm = r.hypot(1.0);
                    ThirdMomentWeights::new(r / norm, 1.0 / norm)?
                }
                None => optimize_alpha_beta(&spec, &point, a.gamma_grid)?.weights,
            };
            constrained_membership_sdp(&spec, &point, weights)?
        }
    };
    let cert = extract_certificate(&outcome)?;
    let mut rec = CertificateRecord::from_certificate(&a.name, &cert);
    rec.meta.insert("mu".into(), a.mu.into());
    rec.meta.insert("angles".into(), angles.to_vec().into());
    rec.meta
        .insert("unconstrained_lambda_star".into(), full.lambda_star.into());
    rec.meta
        .insert("solver_status".into(), outcome.status.clone().into());
    if let Some(w) = cert.weights {
        rec.meta.insert("alpha_over_beta".into(), w.ratio().into());
        if let Some(scale) = a.beta_scale {
            let c = cert
                .combined_coefficient_rescaled(scale)
                .unwrap_or(f64::NAN);
            rec.meta.insert(
                "combined_rescaled".into(),
                json!({ "beta_scale": scale, "coefficient": c }),
            );
        }
    }
    rec.meta
        .insert("config".into(), serde_json::to_value(config)?);
    write_raw_json(out_path(&a.output), &rec)
}

#[derive(Serialize)]
struct StateSummary {
    family: String,
    n_parties: u32,
    theta_star: f64,
    lambda_min: f64,
    ratio: f64,
    /// I2 at the same measurement pair.
    i2_ratio_at_theta: f64,
    /// I2 with its own four angles optimized for this state.
    i2_ratio_optimized: f64,
    kurtosis: pibi::nongauss::KurtosisOptimum,
    negativity: pibi::nongauss::WignerNegativity,
    wigner_normalization: f64,
    psi: Vec<[f64; 2]>,
}

fn extremal(config: &RunConfig, a: &StateArgs) -> Result<(), CliError> {
    json_only(&a.output, "i4-state")?;
    let f = find_family(&a.family)
        .ok_or_else(|| CliError::usage(format!("unknown family `{}`", a.family)))?;
    let st = extremal_state(
        &f,
        a.n,
        ThetaScan {
            grid: a.theta_grid,
            ..ThetaScan::default()
        },
    )?;
    let kurtosis = optimize_kurtosis(&st.psi, KurtosisSearch::default())?;
    let m = MultipoleDecomposition::from_state(&st.psi)?;
    let d = a.n as usize + 1;
    let grid = SphereGrid::new(
        a.grid.n_theta.unwrap_or(2 * d),
        a.grid.n_phi.unwrap_or(2 * d + 1),
    )?;
    let negativity = wigner_negativity(&m, &grid)?;
    let field = wigner_function(&m, &grid);
    let i2 = find_family("I2").expect("built-in");
    let i2_eval = BellEvaluator::for_state(&i2, st.psi.clone(), 1.0);
    let summary = StateSummary {
        family: st.family.clone(),
        n_parties: a.n,
        theta_star: st.theta,
        lambda_min: st.lambda_min,
        ratio: st.ratio,
        i2_ratio_at_theta: i2_eval.ratio(&[0.0, 0.0, 0.0, st.theta]),
        i2_ratio_optimized: optimize_angles_for(&i2_eval, &AngleSearch::default()).ratio,
        kurtosis,
        negativity,
        wigner_normalization: field.normalization(),
        psi: st.psi.iter().map(|z| [z.re, z.im]).collect(),
    };
    if let Some(p) = &a.wigner_out {
        let rows: Vec<Vec<String>> = field
            .rows()
            .map(|(t, ph, w)| vec![num(t), num(ph), num(w)])
            .collect();
        write_csv(Some(p), config, &["theta", "phi", "w"], &rows)?;
    }
    write_json(out_path(&a.output), config, &summary)
}

fn nongauss(config: &RunConfig, a: &NongaussArgs) -> Result<(), CliError> {
    let basis = MultipoleBasis::new(a.n);
    let grid = SphereGrid::for_parties(a.n);
    let search = KurtosisSearch {
        grid: a.kurtosis_grid,
        refine: true,
    };
    let mut rows = Vec::new();
    for mu in a.mu.values() {
        let psi = oat_vector(a.n, mu);
        let k = optimize_kurtosis(&psi, search)?;
        let neg = wigner_negativity(
            &MultipoleDecomposition::from_state_with(&basis, &psi)?,
            &grid,
        )?;
        rows.push(vec![
            num(mu),
            num(k.value),
            num(k.phi),
            num(k.theta),
            num(neg.value),
            neg.n_theta.to_string(),
            neg.n_phi.to_string(),
        ]);
    }
    write_csv(
        out_path(&a.output),
        config,
        &[
            "mu",
            "kurtosis",
            "phi",
            "theta",
            "negativity",
            "n_theta",
            "n_phi",
        ],
        &rows,
    )
}

fn catalog(config: &RunConfig, a: &CatalogArgs) -> Result<(), CliError> {
    json_only(&a.output, "catalog")?;
    write_json(
        out_path(&a.output),
        config,
        &resolve_families(&a.families, true)?,
    )
}
