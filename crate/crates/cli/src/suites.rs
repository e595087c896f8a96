//! The verification suites behind `run_suite`.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qortho::askey_wilson::{aw1_oracle_coeffs, aw_norm, aw_polynomial, gustafson_constant};
use qortho::bcpoly::{AscendingIndex, LaurentPolynomial, Partition};
use qortho::koornwinder::AWParams;
use qortho::measures::{multi_discrete_weight, partial_measure, torus_measure, DiscreteChain};
use qortho::qjacobi_big::{
    askey_evans_box, askey_evans_from_selberg, askey_evans_rhs, asymptotic_match, big_measure, big_polynomial,
    bilinear_big, c_b, c_weight_closed, d_b, limit_measure_big, limit_scan_big, norm_big, selberg_big, BigParams,
};
use qortho::qjacobi_little::{
    bilinear_little, eventually_decreasing, limit_measure_little, limit_scan_little, little_measure,
    little_polynomial, norm_little, selberg_little, LimitRow, LittleParams,
};
use qortho::qracah::{
    bilinear_qr, k_constant, lambda_n, norm_qr, qr_measure, summation_formula, weight_qr_generic, QRacahParams,
};
use qortho::qseries::{qpoch_inf, QBase};
use qortho::quadrature::DiscreteMeasure;

use crate::config::{ConfigError, Suite, SuiteConfig};
use crate::report::{timed, CertificationReport, Check};

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Distance below which a limit scan is considered converged.
pub const LIMIT_TOL: f64 = 1e-4;
/// Agreement required of the renormalized measure-level limit.
pub const LIMIT_MEASURE_TOL: f64 = 1e-3;
/// Probe depth for the asymptotic weight matching.
pub const MATCH_DEPTH: u32 = 25;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn invalid(e: qortho::Error) -> ConfigError {
    ConfigError::Invalid(e.to_string())
}

/// Runs the named suite. Parameter errors surface as `ConfigError`; every
/// numerical failure is recorded as a failing check.
pub fn run_suite(cfg: &SuiteConfig) -> Result<CertificationReport, ConfigError> {
    cfg.validate()?;
    let checks = match cfg.suite {
        Suite::Aw => aw_suite(cfg)?,
        Suite::Qracah => qracah_suite(cfg)?,
        Suite::Little => little_suite(cfg)?,
        Suite::Big => big_suite(cfg)?,
        Suite::Limits => limits_suite(cfg)?,
        Suite::Selberg => selberg_suite(cfg)?,
    };
    Ok(CertificationReport::new(cfg.suite.name(), cfg.echo(), checks))
}

fn lambdas(n: usize, max_deg: u32) -> Vec<Partition> {
    Partition::all_up_to(n, max_deg)
}

/// Diagonal against closed-form norms and off-diagonals relative to
/// √(G_aa G_bb).
fn gram_checks(prefix: &str, anchor: &str, lams: &[Partition], gram: &[Vec<C64>], norms: &[qortho::Result<C64>], tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for a in 0..lams.len() {
        let name = format!("{prefix}/norm/{}", lams[a]);
        out.push(match &norms[a] {
            Ok(nv) => Check::compare(name, anchor, gram[a][a], *nv, None, tol),
            Err(e) => Check::failed(name, anchor, tol, e.to_string()),
        });
        for b in 0..a {
            let scale = (gram[a][a] * gram[b][b]).norm().sqrt();
            out.push(Check::compare(format!("{prefix}/orth/{}|{}", lams[a], lams[b]), anchor, gram[a][b], ZERO, Some(scale), tol));
        }
    }
    out
}

fn aw_params(cfg: &SuiteConfig) -> Result<AWParams, ConfigError> {
    let tt = [0, 1, 2, 3].map(|i| cfg.t_param(i));
    AWParams::new(cfg.q, cfg.t, tt, cfg.n).map_err(invalid)
}

fn aw_suite(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let p = aw_params(cfg)?;
    let discrete = p.tt.iter().any(|x| x.norm() >= 1.0);
    let label = if discrete { "aw-partial" } else { "aw-torus" };
    let mut out = Vec::new();
    let meas: qortho::Result<DiscreteMeasure> =
        if discrete { partial_measure(&p, cfg.m).map(|(m, _)| m) } else { torus_measure(&p, cfg.m) };
    out.extend(timed(|| {
        let anchor = "Gustafson constant term";
        match (&meas, &gustafson_constant(&p)) {
            (Ok(m), Ok(g)) => vec![Check::compare(format!("{label}/constant-term"), anchor, m.total_mass(), *g, None, cfg.tol)],
            (Err(e), _) | (_, Err(e)) => vec![Check::failed(format!("{label}/constant-term"), anchor, cfg.tol, e.to_string())],
        }
    }));
    out.extend(timed(|| {
        let anchor = "Askey-Wilson orthogonality and norm formula";
        let lams = lambdas(cfg.n, cfg.max_deg);
        let polys: qortho::Result<Vec<LaurentPolynomial>> =
            lams.iter().map(|l| aw_polynomial(l, &p).map(|x| x.to_laurent())).collect();
        match (&meas, &polys) {
            (Ok(m), Ok(polys)) => {
                let g = m.gram(polys);
                let norms: Vec<_> = lams.iter().map(|l| aw_norm(l, &p)).collect();
                gram_checks(label, anchor, &lams, &g, &norms, cfg.tol)
            }
            (Err(e), _) | (_, Err(e)) => vec![Check::failed(format!("{label}/gram"), anchor, cfg.tol, e.to_string())],
        }
    }));
    if cfg.n == 1 {
        out.extend(timed(|| {
            let anchor = "one-variable 4phi3 representation";
            (0..=cfg.max_deg)
                .map(|l| {
                    let name = format!("aw-oracle/{l}");
                    let lam = Partition::new(vec![l]).expect("one part");
                    match (aw_polynomial(&lam, &p), aw1_oracle_coeffs(l, &p)) {
                        (Ok(poly), Ok(oracle)) => {
                            let (mut worst, mut at) = (0.0, (ZERO, ZERO));
                            for (k, want) in oracle.iter().enumerate() {
                                let got = poly.coeff(&Partition::new(vec![k as u32]).expect("one part"));
                                let e = (got - want).norm() / want.norm().max(1.0);
                                if e >= worst {
                                    worst = e;
                                    at = (got, *want);
                                }
                            }
                            Check::compare(name, anchor, at.0, at.1, Some(at.1.norm().max(1.0)), cfg.tol)
                        }
                        (Err(e), _) | (_, Err(e)) => Check::failed(name, anchor, cfg.tol, e.to_string()),
                    }
                })
                .collect()
        }));
    }
    Ok(out)
}

fn qracah_suite(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let tt = [0, 1, 2].map(|i| cfg.t_param(i));
    let p = QRacahParams::new(cfg.q, cfg.t, tt, cfg.n, cfg.big_n).map_err(invalid)?;
    let mut out = Vec::new();
    out.extend(timed(|| {
        let anchor = "q-Racah orthogonality and norms";
        let lams = lambda_n(cfg.n, cfg.big_n);
        let built = p.aw_params().and_then(|aw| {
            let polys: qortho::Result<Vec<LaurentPolynomial>> =
                lams.iter().map(|l| aw_polynomial(l, &aw).map(|x| x.to_laurent())).collect();
            Ok((qr_measure(&p)?, polys?))
        });
        match built {
            Ok((meas, polys)) => {
                let g = meas.gram(&polys);
                let norms: Vec<_> = lams.iter().map(|l| norm_qr(l, &p)).collect();
                gram_checks("qracah", anchor, &lams, &g, &norms, cfg.tol)
            }
            Err(e) => vec![Check::failed("qracah/gram", anchor, cfg.tol, e.to_string())],
        }
    }));
    out.extend(timed(|| {
        let anchor = "q-Racah summation formula";
        let one = LaurentPolynomial::one(cfg.n);
        match (bilinear_qr(&one, &one, &p), summation_formula(&p)) {
            (Ok(s), Ok(c)) => vec![Check::compare("qracah/summation", anchor, s, c, None, cfg.tol)],
            (Err(e), _) | (_, Err(e)) => vec![Check::failed("qracah/summation", anchor, cfg.tol, e.to_string())],
        }
    }));
    out.extend(timed(|| discrete_weight_factorization(cfg, 20)));
    Ok(out)
}

/// Δ^(d) = K_r Δ^qR at seeded random chains and parameters.
pub fn discrete_weight_factorization(cfg: &SuiteConfig, count: usize) -> Vec<Check> {
    let anchor = "discrete weight factorization";
    let tol = cfg.tol.min(1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..count)
        .map(|i| {
            let name = format!("qracah/discrete-weight/{i:02}");
            let n = rng.gen_range(1..=3usize);
            let t0 = C64::from_polar(rng.gen_range(1.2..2.5), rng.gen_range(-0.5..0.5));
            let small = |rng: &mut ChaCha8Rng| C64::from_polar(rng.gen_range(0.1..0.6), rng.gen_range(-3.0..3.0));
            let tt = [t0, small(&mut rng), small(&mut rng), small(&mut rng)];
            let (q, t) = (rng.gen_range(0.3..0.7), rng.gen_range(0.2..0.7));
            let r = rng.gen_range(1..=n);
            let mut nu: Vec<u32> = (0..r).map(|_| rng.gen_range(0..4)).collect();
            nu.sort_unstable();
            let run = || -> qortho::Result<(C64, C64)> {
                let p = AWParams::new(q, t, tt, n)?;
                let chain = DiscreteChain { param: 0, nu: AscendingIndex::new(nu.clone())? };
                let d = multi_discrete_weight(&chain, &p)?;
                let k = k_constant(r, &p)? * weight_qr_generic(&chain.nu, &p)?;
                Ok((d, k))
            };
            match run() {
                Ok((d, k)) => Check::compare(name, anchor, d, k, None, tol),
                Err(e) => Check::failed(name, anchor, tol, e.to_string()),
            }
        })
        .collect()
}

fn little_params(cfg: &SuiteConfig) -> Result<LittleParams, ConfigError> {
    LittleParams::new(cfg.q, cfg.t, cfg.a, cfg.b, cfg.n).map_err(invalid)
}

fn big_params(cfg: &SuiteConfig) -> Result<BigParams, ConfigError> {
    BigParams::new(cfg.q, cfg.t, cfg.a, cfg.b, cfg.c, cfg.d, cfg.n).map_err(invalid)
}

/// Tail tolerance used when building Jackson measures.
fn jackson_tol(cfg: &SuiteConfig) -> f64 {
    (cfg.tol * 1e-6).max(1e-15)
}

fn little_selberg(cfg: &SuiteConfig, p: &LittleParams) -> Vec<Check> {
    timed(|| {
        let anchor = "q-Selberg (little q-Jacobi constant term)";
        let one = LaurentPolynomial::one(p.n);
        match (bilinear_little(&one, &one, p, jackson_tol(cfg)), selberg_little(p)) {
            (Ok(m), Ok(s)) => vec![Check::compare(format!("little/selberg/n={}", p.n), anchor, m.value, re(s), None, cfg.tol)],
            (Err(e), _) | (_, Err(e)) => vec![Check::failed(format!("little/selberg/n={}", p.n), anchor, cfg.tol, e.to_string())],
        }
    })
}

fn big_selberg(cfg: &SuiteConfig, p: &BigParams) -> Vec<Check> {
    timed(|| {
        let anchor = "big q-Jacobi constant term";
        let one = LaurentPolynomial::one(p.n);
        match (bilinear_big(&one, &one, p, jackson_tol(cfg)), selberg_big(p)) {
            (Ok(m), Ok(s)) => vec![Check::compare(format!("big/selberg/n={}", p.n), anchor, m.value, re(s), None, cfg.tol)],
            (Err(e), _) | (_, Err(e)) => vec![Check::failed(format!("big/selberg/n={}", p.n), anchor, cfg.tol, e.to_string())],
        }
    })
}

fn little_suite(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let p = little_params(cfg)?;
    let mut out = little_selberg(cfg, &p);
    out.extend(timed(|| {
        let anchor = "little q-Jacobi orthogonality and norms";
        let lams = lambdas(cfg.n, cfg.max_deg);
        let top = lams.last().expect("nonempty").clone();
        let built = little_measure(&p, &top, jackson_tol(cfg)).and_then(|(meas, _, _)| {
            let polys: qortho::Result<Vec<_>> = lams.iter().map(|l| little_polynomial(l, &p, jackson_tol(cfg))).collect();
            Ok((meas, polys?))
        });
        match built {
            Ok((meas, polys)) => {
                let g = meas.gram(&polys);
                let norms: Vec<_> = lams.iter().map(|l| norm_little(l, &p).map(re)).collect();
                gram_checks("little", anchor, &lams, &g, &norms, cfg.tol)
            }
            Err(e) => vec![Check::failed("little/gram", anchor, cfg.tol, e.to_string())],
        }
    }));
    Ok(out)
}

/// The two expressions for the c-weights at seeded random points of V_B.
pub fn c_weight_identity(cfg: &SuiteConfig, count: usize) -> Vec<Check> {
    let anchor = "c-weight closed form";
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xB16);
    let mut out = Vec::new();
    for i in 0..count {
        let n = rng.gen_range(1..=3usize);
        let (q, t) = (rng.gen_range(0.2..0.8), rng.gen_range(0.1..0.9));
        let (c, d) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        let run = || -> qortho::Result<Vec<(C64, C64)>> {
            let p = BigParams::new(q, t, 0.0, 0.0, c, d, n)?;
            let cb = c_b(&p)?;
            (0..=n).map(|j| Ok((re(cb * d_b(j, &p)?), re(c_weight_closed(j, &p)?)))).collect()
        };
        match run() {
            Ok(v) => {
                for (j, (a, b)) in v.into_iter().enumerate() {
                    out.push(Check::compare(format!("big/c-weights/{i:02}/j={j}"), anchor, a, b, None, tol));
                }
            }
            Err(e) => out.push(Check::failed(format!("big/c-weights/{i:02}"), anchor, tol, e.to_string())),
        }
    }
    out
}

fn big_suite(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let p = big_params(cfg)?;
    let mut out = timed(|| c_weight_identity(cfg, 10));
    out.extend(big_selberg(cfg, &p));
    out.extend(timed(|| {
        let anchor = "big q-Jacobi orthogonality and norms";
        let lams = lambdas(cfg.n, cfg.max_deg);
        let top = lams.last().expect("nonempty").clone();
        let built = big_measure(&p, &top, jackson_tol(cfg)).and_then(|(meas, _, _)| {
            let polys: qortho::Result<Vec<_>> = lams.iter().map(|l| big_polynomial(l, &p, jackson_tol(cfg))).collect();
            Ok((meas, polys?))
        });
        match built {
            Ok((meas, polys)) => {
                let g = meas.gram(&polys);
                let norms: Vec<_> = lams.iter().map(|l| norm_big(l, &p).map(re)).collect();
                gram_checks("big", anchor, &lams, &g, &norms, cfg.tol)
            }
            Err(e) => vec![Check::failed("big/gram", anchor, cfg.tol, e.to_string())],
        }
    }));
    if let Some(k) = p.t.integer_power() {
        out.extend(timed(|| askey_evans_checks(cfg, &p, k)));
    }
    out.extend(timed(|| asymptotic_checks(&p)));
    Ok(out)
}

/// Box sum against the displayed constant, and the displayed constant against
/// the general constant term after translation.
pub fn askey_evans_checks(cfg: &SuiteConfig, p: &BigParams, k: u32) -> Vec<Check> {
    let anchor = "Askey-Evans evaluation (t = q^k)";
    let depth = cfg.depth.min(if p.n >= 3 { 45 } else { 80 });
    let rhs = askey_evans_rhs(p, k);
    let mut out = Vec::new();
    let name = format!("big/askey-evans/box/n={}/k={k}", p.n);
    out.push(match (&rhs, &askey_evans_box(p, k, depth)) {
        (Ok(r), Ok(b)) => Check::compare(name, anchor, re(*b), re(*r), None, cfg.tol),
        (Err(e), _) | (_, Err(e)) => Check::failed(name, anchor, cfg.tol, e.to_string()),
    });
    let name = format!("big/askey-evans/translation/n={}/k={k}", p.n);
    out.push(match (&rhs, &askey_evans_from_selberg(p, k)) {
        (Ok(r), Ok(s)) => Check::compare(name, anchor, re(*s), re(*r), None, cfg.tol),
        (Err(e), _) | (_, Err(e)) => Check::failed(name, anchor, cfg.tol, e.to_string()),
    });
    out
}

/// Ratio of the matched weights at probe depth 25 for every split, with zero
/// remaining indices.
pub fn asymptotic_checks(p: &BigParams) -> Vec<Check> {
    let anchor = "asymptotic matching of the c-weights";
    let tol = 1e-5;
    (1..=p.n)
        .map(|j| {
            let name = format!("big/asymptotic/n={}/j={j}", p.n);
            let (lam, mu) = (vec![0; j - 1], vec![0; p.n - j]);
            match asymptotic_match(j, &lam, &mu, p, MATCH_DEPTH) {
                Ok(r) => Check::compare(name, anchor, re(r), ONE, None, tol),
                Err(e) => Check::failed(name, anchor, tol, e.to_string()),
            }
        })
        .collect()
}

/// A limit scan passes when the recorded distances are eventually
/// decreasing and the last one is below [`LIMIT_TOL`]. Rows where the
/// Askey–Wilson side could not be built are skipped and listed in the note.
pub fn scan_check(name: String, anchor: &str, rows: &[LimitRow]) -> Check {
    let last = rows.iter().rev().find_map(|r| r.distance.map(|d| (r.k, d)));
    let skipped: Vec<String> = rows.iter().filter(|r| r.distance.is_none()).map(|r| r.k.to_string()).collect();
    let Some((k, d)) = last else {
        return Check::failed(name, anchor, LIMIT_TOL, "no row of the scan could be computed".into());
    };
    let mut c = Check::compare(name, anchor, re(d), ZERO, Some(1.0), LIMIT_TOL);
    let decreasing = eventually_decreasing(rows, 5, 1e-10);
    c.pass &= decreasing;
    let mut note = format!("final k = {k}");
    if !decreasing {
        note += "; distances not eventually decreasing";
    }
    if !skipped.is_empty() {
        note += &format!("; skipped k = {}", skipped.join(","));
    }
    c.with_note(note)
}

fn limits_suite(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let pl = little_params(cfg)?;
    let pb = big_params(cfg)?;
    let lams: Vec<Partition> = lambdas(cfg.n, cfg.max_deg).into_iter().filter(|l| !l.is_zero()).collect();
    let mut out = Vec::new();
    for lam in &lams {
        out.extend(timed(|| {
            let anchor = "Askey-Wilson to little q-Jacobi limit";
            let name = format!("limits/little/{lam}");
            match limit_scan_little(lam, &pl, cfg.eps0, cfg.kmax) {
                Ok(rows) => vec![scan_check(name, anchor, &rows)],
                Err(e) => vec![Check::failed(name, anchor, LIMIT_TOL, e.to_string())],
            }
        }));
        out.extend(timed(|| {
            let anchor = "Askey-Wilson to big q-Jacobi limit";
            let name = format!("limits/big/{lam}");
            match limit_scan_big(lam, &pb, cfg.eps0, cfg.kmax) {
                Ok(rows) => vec![scan_check(name, anchor, &rows)],
                Err(e) => vec![Check::failed(name, anchor, LIMIT_TOL, e.to_string())],
            }
        }));
    }
    let mut first = vec![0; cfg.n];
    first[0] = 1;
    let (l1, l0) = (Partition::new(first).expect("partition"), Partition::zero(cfg.n));
    let k = cfg.kmax.min(14);
    let eps = cfg.eps0 * cfg.q.powi(k as i32);
    let m = cfg.m.max(64);
    out.extend(timed(|| {
        let anchor = "renormalized measure limit (little)";
        let name = format!("limits/measure/little/k={k}");
        match limit_measure_little(&l1, &l0, &pl, eps, m) {
            Ok((a, b)) => vec![Check::compare(name, anchor, re(a), re(b), None, LIMIT_MEASURE_TOL)],
            Err(e) => vec![Check::failed(name, anchor, LIMIT_MEASURE_TOL, e.to_string())],
        }
    }));
    out.extend(timed(|| {
        let anchor = "renormalized measure limit (big)";
        let name = format!("limits/measure/big/k={k}");
        match limit_measure_big(&l1, &l0, &pb, eps, m) {
            Ok((a, b)) => vec![Check::compare(name, anchor, re(a), re(b), None, LIMIT_MEASURE_TOL)],
            Err(e) => vec![Check::failed(name, anchor, LIMIT_MEASURE_TOL, e.to_string())],
        }
    }));
    Ok(out)
}

fn selberg_suite(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let pl = little_params(cfg)?;
    let mut out = little_selberg(cfg, &pl);
    if cfg.n == 1 {
        out.extend(timed(|| {
            // classical q-beta integral (1−q)(q, abq²;q)_∞ / (aq, bq;q)_∞
            let q = cfg.q;
            let qb = QBase::new(q).expect("validated");
            let qp = |x: f64| qpoch_inf(re(x), qb).re;
            let beta = (1.0 - q) * qp(q) * qp(cfg.a * cfg.b * q * q) / (qp(cfg.a * q) * qp(cfg.b * q));
            let anchor = "q-beta integral";
            match selberg_little(&pl) {
                Ok(s) => vec![Check::compare("selberg/q-beta", anchor, re(s), re(beta), None, cfg.tol)],
                Err(e) => vec![Check::failed("selberg/q-beta", anchor, cfg.tol, e.to_string())],
            }
        }));
    }
    out.extend(big_selberg(cfg, &big_params(cfg)?));
    let p = aw_params(cfg)?;
    out.extend(timed(|| {
        let anchor = "Gustafson constant term";
        let m = cfg.m.max(if cfg.n >= 3 { 48 } else { 128 });
        let meas = if p.tt.iter().any(|x| x.norm() >= 1.0) { partial_measure(&p, m).map(|x| x.0) } else { torus_measure(&p, m) };
        match (meas, gustafson_constant(&p)) {
            (Ok(ms), Ok(g)) => vec![Check::compare(format!("selberg/gustafson/n={}", cfg.n), anchor, ms.total_mass(), g, None, cfg.tol)],
            (Err(e), _) | (_, Err(e)) => vec![Check::failed(format!("selberg/gustafson/n={}", cfg.n), anchor, cfg.tol, e.to_string())],
        }
    }));
    Ok(out)
}
