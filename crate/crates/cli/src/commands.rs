use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use scargraph::coupling::{couple, Sector};
use scargraph::ensemble::{bipartite_check, sample_hl, EnsembleParams};
use scargraph::entanglement::{overlap_csv, overlap_sweep, scan_csv_rows, EntanglementRecord, SCAN_CSV_HEADER};
use scargraph::fib_basis::{gray_order, pxp_direct, pxp_gray, zeckendorf_basis, zeckendorf_decode, PxpConfig};
use scargraph::rk_dimer::{rk_csv, rk_entropy_asymptote, rk_entropy_exact, rk_table};
use scargraph::scars::{analyze_sample, CertificateKind, certificates_jsonl, sqrt2_analysis, subgraph_csv, subgraph_probability, ClassCounts};
use scargraph::spectral::{coupled_energies, eigvalsh, spacing_ratios, LevelStatistics};

use crate::args::{Basis, Common, EnsembleArgs, EntScanArgs, Format, LevelArgs, OverlapArgs, PxpArgs, RkArgs, SectorArg, Sqrt2Args, SubgraphArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::OutDir;

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_rows<T: Serialize>(rows: &T) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize") + "\n"
}

fn sectors(s: SectorArg) -> Vec<Sector> {
    match s {
        SectorArg::Plus => vec![Sector::Plus],
        SectorArg::Minus => vec![Sector::Minus],
        SectorArg::Both => Sector::both().to_vec(),
    }
}

fn sector_name(s: Sector) -> &'static str {
    match s {
        Sector::Plus => "plus",
        Sector::Minus => "minus",
    }
}

fn need_samples(common: &Common) -> CliResult<()> {
    if common.samples == 0 {
        return Err(CliError::Invalid("--samples must be at least 1".into()));
    }
    Ok(())
}

/// Parameters of sample `k`, validated up front.
fn sample_params(common: &Common, e: &EnsembleArgs) -> CliResult<Vec<EnsembleParams>> {
    need_samples(common)?;
    let base = EnsembleParams::new(e.d, e.d_prime, e.p, common.seed)?;
    Ok((0..common.samples as u64).map(|k| base.with_seed(common.seed.wrapping_add(k))).collect())
}

#[derive(Serialize)]
struct LevelRow {
    index: usize,
    energy: f64,
}

#[derive(Serialize)]
struct BasisRow {
    index: usize,
    zeckendorf: u64,
    config: String,
}

pub fn pxp(common: &Common, a: &PxpArgs, out: &mut OutDir) -> CliResult<Value> {
    let (g, configs): (_, Vec<PxpConfig>) = match a.basis {
        Basis::Zeckendorf => (pxp_direct(a.l)?, zeckendorf_basis(a.l)?),
        Basis::Gray => (pxp_gray(a.l)?, gray_order(a.l)?),
    };
    let energies = eigvalsh(&g.to_dense::<f64>())?;
    let unit_offdiagonal = (0..g.n_vertices().saturating_sub(1)).all(|k| g.has_edge(k, k + 1));
    let n = energies.len();
    let symmetry_error = (0..n).map(|k| (energies[k] + energies[n - 1 - k]).abs()).fold(0.0, f64::max);

    out.write("matrix.edges", &g.to_edge_list())?;
    let levels: Vec<LevelRow> = energies.iter().enumerate().map(|(k, &e)| LevelRow { index: k + 1, energy: e }).collect();
    let basis: Vec<BasisRow> = configs
        .iter()
        .enumerate()
        .map(|(k, c)| Ok(BasisRow { index: k + 1, zeckendorf: zeckendorf_decode(c)?, config: c.to_string() }))
        .collect::<scargraph::Result<_>>()?;
    match common.format {
        Format::Csv => {
            let mut s = String::from("index,energy\n");
            for r in &levels {
                let _ = writeln!(s, "{},{}", r.index, f(r.energy));
            }
            out.write("spectrum.csv", &s)?;
            let mut b = String::from("index,zeckendorf,config\n");
            for r in &basis {
                let _ = writeln!(b, "{},{},{}", r.index, r.zeckendorf, r.config);
            }
            out.write("basis.csv", &b)?;
        }
        Format::Json => {
            out.write("spectrum.json", &json_rows(&levels))?;
            out.write("basis.json", &json_rows(&basis))?;
        }
    }
    Ok(json!({
        "dim": g.n_vertices(),
        "edges": g.edge_count(),
        "unit_offdiagonal": unit_offdiagonal,
        "symmetry_error": symmetry_error,
    }))
}

#[derive(Serialize)]
struct SampleRow {
    sample_id: usize,
    seed: u64,
    edges: usize,
    bipartite: bool,
    file: String,
}

pub fn sample(common: &Common, e: &EnsembleArgs, out: &mut OutDir) -> CliResult<Value> {
    let params = sample_params(common, e)?;
    let graphs = params.par_iter().map(sample_hl).collect::<scargraph::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (k, (p, g)) in params.iter().zip(&graphs).enumerate() {
        let file = format!("graph_{k:05}.edges");
        out.write(&file, &g.to_edge_list())?;
        let bipartite = bipartite_check(g)?.is_some();
        rows.push(SampleRow { sample_id: k, seed: p.seed, edges: g.edge_count(), bipartite, file });
    }
    match common.format {
        Format::Csv => {
            let mut s = String::from("sample_id,seed,edges,bipartite,file\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.sample_id, r.seed, r.edges, r.bipartite, r.file);
            }
            out.write("samples.csv", &s)?;
        }
        Format::Json => out.write("samples.json", &json_rows(&rows))?,
    }
    Ok(json!({ "samples": rows.len(), "all_bipartite": rows.iter().all(|r| r.bipartite) }))
}

#[derive(Serialize)]
struct EnergyRow {
    sample_id: usize,
    seed: u64,
    sector: &'static str,
    index: usize,
    energy: f64,
}

pub fn spectrum(common: &Common, e: &EnsembleArgs, out: &mut OutDir) -> CliResult<Value> {
    let params = sample_params(common, e)?;
    let sector = match common.sector {
        SectorArg::Plus => Some(Sector::Plus),
        SectorArg::Minus => Some(Sector::Minus),
        SectorArg::Both => None,
    };
    let label = sector.map(sector_name).unwrap_or("both");
    let spectra = params
        .par_iter()
        .map(|p| -> scargraph::Result<Vec<f64>> { coupled_energies(&couple(&sample_hl(p)?, p.d_prime)?, sector) })
        .collect::<scargraph::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut symmetry_error = 0.0f64;
    for (k, (p, energies)) in params.iter().zip(&spectra).enumerate() {
        let n = energies.len();
        if sector.is_none() {
            for i in 0..n {
                symmetry_error = symmetry_error.max((energies[i] + energies[n - 1 - i]).abs());
            }
        }
        rows.extend(energies.iter().enumerate().map(|(i, &x)| EnergyRow {
            sample_id: k,
            seed: p.seed,
            sector: label,
            index: i + 1,
            energy: x,
        }));
    }
    match common.format {
        Format::Csv => {
            let mut s = String::from("sample_id,seed,sector,index,energy\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.sample_id, r.seed, r.sector, r.index, f(r.energy));
            }
            out.write("spectrum.csv", &s)?;
        }
        Format::Json => out.write("spectrum.json", &json_rows(&rows))?,
    }
    let mut summary = json!({ "samples": spectra.len(), "levels": rows.len() });
    if sector.is_none() {
        summary["symmetry_error"] = json!(symmetry_error);
    }
    Ok(summary)
}

#[derive(Serialize)]
struct ScanRow {
    sample_id: usize,
    energy: f64,
    entropy: f64,
    inversion: i8,
    degeneracy_size: usize,
    lambda1_sq: f64,
    scar_class: String,
}

fn keep(record: &EntanglementRecord<f64>, sector: SectorArg) -> bool {
    match sector {
        SectorArg::Both => true,
        SectorArg::Plus => record.inversion >= 0,
        SectorArg::Minus => record.inversion <= 0,
    }
}

pub fn ent_scan(common: &Common, a: &EntScanArgs, out: &mut OutDir) -> CliResult<Value> {
    let params = sample_params(common, &a.ensemble)?;
    let analyses = params
        .par_iter()
        .map(|p| analyze_sample::<f64>(p, a.threshold))
        .collect::<scargraph::Result<Vec<_>>>()?;
    let mut csv = format!("{SCAN_CSV_HEADER}\n");
    let mut rows = Vec::new();
    let mut per_sample = Vec::new();
    let mut total = ClassCounts::default();
    for (k, s) in analyses.iter().enumerate() {
        let kept: Vec<EntanglementRecord<f64>> = s.records.iter().filter(|r| keep(r, common.sector)).cloned().collect();
        let counts = ClassCounts::of(&kept);
        total.add(&counts);
        per_sample.push(json!({
            "sample_id": k,
            "seed": s.params.seed,
            "states": kept.len(),
            "counts": counts,
            "built_scars": {
                "triangle": s.scars.iter().filter(|x| x.kind == CertificateKind::Triangle).count(),
                "diamond": s.scars.iter().filter(|x| x.kind == CertificateKind::Diamond).count(),
            },
            "unexplained": s.census.n_unexplained(),
            "beyond_motifs": s.census.n_beyond_motifs,
        }));
        match common.format {
            Format::Csv => csv.push_str(&scan_csv_rows(k, &kept)),
            Format::Json => rows.extend(kept.iter().map(|r| ScanRow {
                sample_id: k,
                energy: r.energy,
                entropy: r.entropy,
                inversion: r.inversion,
                degeneracy_size: r.degeneracy_size,
                lambda1_sq: r.lambda1_sq,
                scar_class: r.scar_class.to_string(),
            })),
        }
    }
    match common.format {
        Format::Csv => out.write("scan.csv", &csv)?,
        Format::Json => out.write("scan.json", &json_rows(&rows))?,
    }
    let summary = json!({ "threshold": a.threshold, "counts": total, "samples": per_sample });
    out.write("scan_summary.json", &(serde_json::to_string_pretty(&summary).expect("summary") + "\n"))?;
    Ok(json!({ "samples": analyses.len(), "counts": total }))
}

#[derive(Serialize)]
struct ScarRow {
    sample_id: usize,
    kind: String,
    certificate: usize,
    partner: usize,
    energy: f64,
    inversion: i8,
    residual: f64,
    entropy: f64,
}

pub fn scar_scan(common: &Common, e: &EnsembleArgs, out: &mut OutDir) -> CliResult<Value> {
    let params = sample_params(common, e)?;
    let analyses = params
        .par_iter()
        .map(|p| analyze_sample::<f64>(p, scargraph::entanglement::DEFAULT_RANK1_THRESHOLD))
        .collect::<scargraph::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut census = Vec::new();
    let mut unexplained = 0;
    for (k, s) in analyses.iter().enumerate() {
        out.write(&format!("certificates_{k:05}.jsonl"), &certificates_jsonl(&s.certificates))?;
        for sc in s.scars.iter().filter(|sc| sectors(common.sector).iter().any(|x| x.sign() == sc.inversion)) {
            rows.push(ScarRow {
                sample_id: k,
                kind: format!("{:?}", sc.kind).to_lowercase(),
                certificate: sc.certificate,
                partner: sc.partner + 1,
                energy: sc.energy,
                inversion: sc.inversion,
                residual: sc.residual,
                entropy: sc.entropy,
            });
        }
        unexplained += s.census.n_unexplained();
        census.push(json!({ "sample_id": k, "seed": s.params.seed, "report": s.census }));
    }
    match common.format {
        Format::Csv => {
            let mut s = String::from("sample_id,kind,certificate,partner,energy,inversion,residual,entropy\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.sample_id,
                    r.kind,
                    r.certificate,
                    r.partner,
                    f(r.energy),
                    r.inversion,
                    f(r.residual),
                    f(r.entropy)
                );
            }
            out.write("scars.csv", &s)?;
        }
        Format::Json => out.write("scars.json", &json_rows(&rows))?,
    }
    out.write("census.json", &json_rows(&census))?;
    Ok(json!({ "samples": analyses.len(), "scars": rows.len(), "unexplained": unexplained }))
}

pub fn level_stats(common: &Common, a: &LevelArgs, out: &mut OutDir) -> CliResult<Value> {
    if a.bins == 0 {
        return Err(CliError::Invalid("--bins must be at least 1".into()));
    }
    let params = sample_params(common, &a.ensemble)?;
    let secs = sectors(common.sector);
    let per_sample = params
        .par_iter()
        .map(|p| -> scargraph::Result<Vec<LevelStatistics>> {
            let h = couple(&sample_hl(p)?, p.d_prime)?;
            secs.iter().map(|&s| spacing_ratios(&coupled_energies::<f64>(&h, Some(s))?)).collect()
        })
        .collect::<scargraph::Result<Vec<_>>>()?;
    let flat: Vec<LevelStatistics> = per_sample.into_iter().flatten().collect();
    let mut stats = LevelStatistics::pool(&flat);
    stats.n_samples = params.len();
    stats.rebin(a.bins);
    match common.format {
        Format::Csv => out.write("histogram.csv", &stats.histogram_csv())?,
        Format::Json => out.write("histogram.json", &json_rows(&stats.histogram))?,
    }
    out.write("level_summary.json", &(stats.summary_json() + "\n"))?;
    Ok(serde_json::to_value(stats.summary()).expect("summary"))
}

pub fn overlap_scan(common: &Common, a: &OverlapArgs, out: &mut OutDir) -> CliResult<Value> {
    need_samples(common)?;
    let rows = overlap_sweep(a.d, &a.d_prime, &a.p, common.samples, common.seed)?;
    match common.format {
        Format::Csv => out.write("overlap.csv", &overlap_csv(&rows))?,
        Format::Json => out.write("overlap.json", &json_rows(&rows))?,
    }
    Ok(json!({ "points": rows.len() }))
}

pub fn subgraph_prob(common: &Common, a: &SubgraphArgs, out: &mut OutDir) -> CliResult<Value> {
    need_samples(common)?;
    let rows = subgraph_probability(a.d, &a.p_grid, common.samples, common.seed, !a.no_backbone)?;
    match common.format {
        Format::Csv => out.write("subgraph.csv", &subgraph_csv(&rows))?,
        Format::Json => out.write("subgraph.json", &json_rows(&rows))?,
    }
    let dominated = rows.iter().all(|r| r.frac_triangle >= r.frac_diamond);
    Ok(json!({ "points": rows.len(), "triangle_at_least_diamond": dominated }))
}

pub fn rk_check(common: &Common, a: &RkArgs, out: &mut OutDir) -> CliResult<Value> {
    if a.min_l < 4 || a.min_l > a.max_l {
        return Err(CliError::Invalid(format!("need 4 <= min-L <= max-L, got {}..{}", a.min_l, a.max_l)));
    }
    let start = a.min_l + a.min_l % 2;
    let sizes: Vec<usize> = (start..=a.max_l).step_by(2).collect();
    let rows = sizes
        .par_iter()
        .map(|&l| rk_table([l]).map(|mut v| v.remove(0)))
        .collect::<scargraph::Result<Vec<_>>>()?;
    match common.format {
        Format::Csv => out.write("rk.csv", &rk_csv(&rows))?,
        Format::Json => out.write("rk.json", &json_rows(&rows))?,
    }
    let max_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    Ok(json!({
        "sizes": rows.len(),
        "max_abs_diff": max_diff,
        "entropy_exact_40": rk_entropy_exact(40)?,
        "asymptote": rk_entropy_asymptote(),
    }))
}

pub fn sqrt2_check(common: &Common, a: &Sqrt2Args, out: &mut OutDir) -> CliResult<Value> {
    let mut reports = Vec::new();
    for &n in &a.sites {
        if n % 2 == 1 {
            return Err(CliError::Invalid(format!("total length {n} must be even")));
        }
        reports.push(sqrt2_analysis(n / 2)?);
    }
    match common.format {
        Format::Json => out.write("sqrt2.json", &json_rows(&reports))?,
        Format::Csv => {
            let mut s = String::from("sites,energy,inversion,w1,w2,rank_two_halves,factorized,residual_2l\n");
            for r in &reports {
                for st in &r.states {
                    let w = |i: usize| st.schmidt_sq.get(i).copied().unwrap_or(0.0);
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{}",
                        r.total_sites,
                        f(st.energy),
                        st.inversion,
                        f(w(0)),
                        f(w(1)),
                        st.rank_two_halves,
                        st.factorized,
                        f(st.residual_2l)
                    );
                }
            }
            out.write("sqrt2.csv", &s)?;
        }
    }
    let per_size: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "sites": r.total_sites,
                "states": r.states.len(),
                "rank_two_halves": r.states.iter().filter(|s| s.rank_two_halves).count(),
                "note": r.note,
            })
        })
        .collect();
    Ok(json!({ "sizes": per_size }))
}
