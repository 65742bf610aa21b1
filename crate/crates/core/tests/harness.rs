use uplink_core::harness::{
    check_oracle_agreement, check_orderings, emit_csv, emit_gnuplot, format_number, parse_config,
    preset, read_csv, run_sweep, write_csv, CsvRecord, Figure, Processing, CSV_HEADER,
};
use uplink_core::Scheme;

fn csv_bytes(figure: Figure) -> Vec<u8> {
    let mut out = Vec::new();
    emit_csv(&run_sweep(&preset(figure)).unwrap(), &mut out).unwrap();
    out
}

#[test]
fn fig3_csv_has_header_and_126_rows() {
    let text = String::from_utf8(csv_bytes(Figure::Fig3)).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sweep_param,sweep_value,scheme,processing,rate_bits,oracle_mean,oracle_stderr,per_active_user_rate"
    );
    assert_eq!(CSV_HEADER.join(","), text.lines().next().unwrap());
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 126);
    assert!(rows[0].starts_with("power_db,0,NPC,MCP,"));
    assert!(rows.iter().all(|r| r.ends_with(",,,")));
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    for figure in Figure::ALL {
        assert_eq!(csv_bytes(figure), csv_bytes(figure), "{figure}");
    }
}

#[test]
fn csv_round_trips_through_reader() {
    let result = run_sweep(&preset(Figure::Fig4)).unwrap();
    let mut out = Vec::new();
    emit_csv(&result, &mut out).unwrap();
    assert_eq!(
        read_csv(out.as_slice()).unwrap(),
        CsvRecord::from_result(&result)
    );
}

#[test]
fn write_csv_creates_file_and_reports_bad_paths() {
    let result = run_sweep(&preset(Figure::Fig6)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig6.csv");
    write_csv(&result, &path).unwrap();
    let mut expected = Vec::new();
    emit_csv(&result, &mut expected).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), expected);
    let err = write_csv(&result, &dir.path().join("missing/fig6.csv")).unwrap_err();
    assert!(err.to_string().contains("missing"), "{err}");
}

#[test]
fn numbers_use_twelve_significant_digits() {
    assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
    assert_eq!(format_number(20.0), "20");
    assert_eq!(format_number(0.05), "0.05");
    assert_eq!(format_number(2.0f64.sqrt() * 1e-7), "1.41421356237e-07");
    assert_eq!(format_number(1.5e-5), "1.5e-05");
    assert_eq!(format_number(1.5e-4), "0.00015");
    assert_eq!(format_number(-2.5e15), "-2.5e+15");
    assert_eq!(format_number(123456789012.0), "123456789012");
}

#[test]
fn sweep_rows_follow_grid_then_scheme_then_processing() {
    let result = run_sweep(&preset(Figure::Fig5)).unwrap();
    assert_eq!(result.rows.len(), 30 * 6);
    let first: Vec<(Scheme, Processing)> = result.rows[..6]
        .iter()
        .map(|r| (r.scheme, r.processing))
        .collect();
    let expected: Vec<(Scheme, Processing)> = Scheme::ALL
        .into_iter()
        .flat_map(|s| Processing::ALL.into_iter().map(move |p| (s, p)))
        .collect();
    assert_eq!(first, expected);
    assert!(result.rows.windows(2).all(|w| w[0].value <= w[1].value));
}

#[test]
fn presets_satisfy_ordering_checks() {
    for figure in Figure::ALL {
        let result = run_sweep(&preset(figure)).unwrap();
        assert!(check_orderings(&result).is_empty(), "{figure}");
        assert_eq!(result.failed().count(), 0);
    }
}

#[test]
fn configured_sweep_with_validation_agrees_with_oracle() {
    let spec = parse_config(
        "# short validated sweep\nsweep = alpha1\ngrid = 0.25, 0.9\nK = 5\nq = 0.3\npower_db = 5\nschemes = npc, cpc\nprocessing = both\nvalidate = 300,30,1\n",
    )
    .unwrap();
    let result = run_sweep(&spec).unwrap();
    assert_eq!(result.rows.len(), 8);
    assert!(result.rows.iter().all(|r| r.oracle.is_some()));
    assert!(
        check_oracle_agreement(&result).is_empty(),
        "{:?}",
        check_oracle_agreement(&result)
    );
}

#[test]
fn per_active_user_rates_divide_by_expected_active_users() {
    let result = run_sweep(&preset(Figure::Fig4)).unwrap();
    for row in &result.rows {
        let expected = row.rate.unwrap() / (5.0 * (1.0 - row.value));
        assert!((row.per_active_user.unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn config_errors_name_the_offending_line() {
    let err = parse_config("sweep = q\ngrid = 0.1\nbogus = 3\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    assert!(parse_config("sweep = q\n").is_err());
    assert!(parse_config("sweep = q\ngrid = 0.1\nq = 0.2\nq = 0.3\n").is_err());
    assert!(parse_config("sweep = q\ngrid = 1.5\n")
        .and_then(|s| run_sweep(&s))
        .is_err());
}

#[test]
fn gnuplot_output_has_one_block_per_curve() {
    let mut out = Vec::new();
    emit_gnuplot(&run_sweep(&preset(Figure::Fig3)).unwrap(), &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with('#')).count(),
        6,
        "{text}"
    );
}
