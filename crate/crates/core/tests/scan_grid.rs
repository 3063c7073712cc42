use gabor_core::scan::{
    agreement, emit_report, parse_json_report, render_report, scan_grid, ParamRange, ReportFormat, ScanConfig, CSV_HEADER,
};
use gabor_core::{CauchyTerm, Method, Verdict, WindowSpec};

fn small_config(workers: usize) -> ScanConfig {
    let spec = WindowSpec::cauchy_mod_sum(-0.1, vec![CauchyTerm::real(1.0, 0.0), CauchyTerm::real(0.5, 1.0)]).unwrap();
    let mut cfg = ScanConfig::new(spec, ParamRange::new(0.3, 1.3, 3).unwrap(), ParamRange::new(0.6, 1.2, 2).unwrap());
    cfg.methods = vec![Method::Criterion, Method::FiniteSection];
    cfg.trunc_n = 16;
    cfg.trunc_m = 32;
    cfg.resolution = 0.125;
    cfg.workers = workers;
    cfg
}

#[test]
fn rows_do_not_depend_on_worker_count() {
    let one = scan_grid(&small_config(1)).unwrap();
    let three = scan_grid(&small_config(3)).unwrap();
    assert_eq!(one, three);
    assert_eq!(
        render_report(&one, ReportFormat::Csv).unwrap(),
        render_report(&three, ReportFormat::Csv).unwrap()
    );
}

#[test]
fn report_round_trips_and_agreement_counts_by_hand() {
    let cfg = small_config(0);
    let rows = scan_grid(&cfg).unwrap();
    // 3 α × 2 β × 2 methods
    assert_eq!(rows.len(), 12);
    let csv = render_report(&rows, ReportFormat::Csv).unwrap();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    assert_eq!(csv.lines().count(), 13);

    let dir = std::env::temp_dir().join(format!("gabor-scan-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    emit_report(&rows, ReportFormat::Json, Some(&path)).unwrap();
    let back = parse_json_report(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(back.len(), rows.len());
    for (a, b) in back.iter().zip(&rows) {
        assert_eq!((a.verdict, a.method, a.predicted), (b.verdict, b.method, b.predicted));
    }

    let by_hand = rows
        .iter()
        .filter(|r| r.method != Method::Predicted && (r.alpha * r.beta - 1.0).abs() >= 0.05)
        .collect::<Vec<_>>();
    let agreed = by_hand.iter().filter(|r| r.verdict == r.predicted).count();
    let a = agreement(&cfg.window, &rows, 0.05);
    assert_eq!((a.compared, a.agreed), (by_hand.len(), agreed));
    assert!(by_hand.iter().all(|r| r.predicted != Verdict::Unknown));
}
