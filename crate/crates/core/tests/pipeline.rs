use scargraph::coupling::{couple, Sector};
use scargraph::ensemble::{sample_hl, EnsembleParams};
use scargraph::entanglement::{rank1_scan, scan_csv_rows, ScarClass, DEFAULT_RANK1_THRESHOLD, SCAN_CSV_HEADER};
use scargraph::fib_basis::{pxp_direct, pxp_gray};
use scargraph::scars::{analyze_sample, certificates_jsonl, ClassCounts};
use scargraph::spectral::{diagonalize_coupled, eigh, eigvalsh};
use scargraph::{BinaryGraph, MatrixF32};

#[test]
fn edge_list_and_params_roundtrip() {
    let p = EnsembleParams::new(30, 22, 0.35, 99).unwrap();
    let g = sample_hl(&p).unwrap();
    let back = BinaryGraph::from_edge_list(&g.to_edge_list(), Some(30)).unwrap();
    assert_eq!(back, g);
    assert_eq!(EnsembleParams::from_json(&p.to_json()).unwrap(), p);
}

#[test]
fn scan_covers_both_sectors() {
    let p = EnsembleParams::new(16, 11, 0.4, 5).unwrap();
    let h = couple(&sample_hl(&p).unwrap(), 11).unwrap();
    let cs = diagonalize_coupled::<f64>(&h).unwrap();
    assert!(cs.plus.max_residual(&cs.plus_basis.block(&h)) < 1e-10);
    assert!(cs.minus.orthonormality_error() < 1e-10);
    let recs = rank1_scan(&cs, h.basis(), DEFAULT_RANK1_THRESHOLD).unwrap();
    assert_eq!(recs.len(), h.dim());
    assert_eq!(recs.iter().filter(|r| r.inversion == Sector::Plus.sign()).count(), cs.plus.len());
    let csv = format!("{SCAN_CSV_HEADER}\n{}", scan_csv_rows(0, &recs));
    assert_eq!(csv.lines().count(), h.dim() + 1);
    for r in &recs {
        assert!(r.entropy >= -1e-12 && r.entropy <= (16f64).ln() + 1e-9);
    }
}

#[test]
fn dense_sample_builds_exact_scars() {
    let p = EnsembleParams::new(24, 20, 0.9, 2).unwrap();
    let a = analyze_sample::<f64>(&p, DEFAULT_RANK1_THRESHOLD).unwrap();
    assert!(a.census.n_valid_certificates > 0);
    assert!(!a.scars.is_empty());
    assert_eq!(a.census.n_unexplained(), 0);
    for s in &a.scars {
        assert!(s.residual < 1e-9);
        assert!((s.entropy - std::f64::consts::LN_2).abs() < 1e-9);
    }
    assert!(certificates_jsonl(&a.certificates).lines().all(|l| l.starts_with("{\"kind\":")));
    let counts = ClassCounts::of(&a.records);
    assert_eq!(counts.none + counts.rank1 + counts.triangle + counts.diamond, a.records.len());
}

#[test]
fn product_resolution_at_full_cutoff() {
    let p = EnsembleParams::new(10, 10, 0.5, 4).unwrap();
    let a = analyze_sample::<f64>(&p, DEFAULT_RANK1_THRESHOLD).unwrap();
    assert_eq!(a.records.len(), 100);
    assert!(a.records.iter().all(|r| r.scar_class == ScarClass::Rank1 && r.entropy == 0.0));
}

#[test]
fn single_precision_tracks_double() {
    let g = pxp_direct(8).unwrap();
    let e64 = eigvalsh(&g.to_dense::<f64>()).unwrap();
    let m32: MatrixF32 = g.to_dense::<f32>();
    let s32 = eigh(&m32).unwrap();
    for (a, b) in e64.iter().zip(s32.energies()) {
        assert!((a - *b as f64).abs() < 1e-4);
    }
    assert!(s32.orthonormality_error() < 1e-4);
}

#[test]
fn gray_basis_has_unit_superdiagonal() {
    for l in 1..=12 {
        let g = pxp_gray(l).unwrap();
        assert!((0..g.n_vertices() - 1).all(|k| g.has_edge(k, k + 1)));
        let a = eigvalsh(&g.to_dense::<f64>()).unwrap();
        let b = eigvalsh(&pxp_direct(l).unwrap().to_dense::<f64>()).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-10));
    }
}
