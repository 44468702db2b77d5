use virtri::covers::SearchMode;
use virtri::pipeline::{verify_file, virtualize, PipelineConfig, PipelineReport, RunStatus, VerifyError};
use virtri::pulling::OrderSpec;
use virtri::{fixtures, ComplexFile};

#[test]
fn report_round_trips() {
    let run = virtualize(&fixtures::figure_eight(), &PipelineConfig::default()).unwrap();
    let json = run.report.to_json();
    let back = PipelineReport::parse(&json).unwrap();
    assert_eq!(back.to_json(), json);
    assert_eq!(back.format, "vtr-1");
    assert!(back.timings.is_some());
    assert!(!run.report.deterministic_json().contains("timings"));
    let cover = back.cover.unwrap();
    assert!(cover.regular);
    assert_eq!(cover.returning_diagonals, 0);
    assert_eq!(cover.euler_characteristic, 0);
    assert!(format!("{}", run.report).contains("degree 12"));
}

#[test]
fn per_diagonal_mode_also_verifies() {
    for base in [fixtures::figure_eight(), fixtures::whitehead()] {
        let config = PipelineConfig { mode: SearchMode::PerDiagonal, ..PipelineConfig::default() };
        let run = virtualize(&base, &config).unwrap();
        let v = run.result.unwrap();
        let cover = run.report.cover.unwrap();
        assert!(cover.regular);
        assert!(!cover.sources.is_empty());
        let text = v.to_file().to_json();
        let cert = verify_file(&ComplexFile::parse(&text).unwrap(), &base).unwrap();
        assert!(cert.passed);
    }
}

#[test]
fn corrupted_output_fails_verification() {
    let base = fixtures::whitehead();
    let run = virtualize(&base, &PipelineConfig::default()).unwrap();
    let mut file = run.result.unwrap().to_file();
    // re-glue one simplex facet to the wrong target
    let a = file.pairings[0].dst;
    let b = file.pairings[1].dst;
    file.pairings[0].dst = b;
    file.pairings[1].dst = a;
    match verify_file(&file, &base) {
        Ok(cert) => assert!(!cert.passed),
        Err(VerifyError::Pulling(_)) | Err(VerifyError::Cover(_)) => {}
    }
    // a certificate that disagrees with the data is a failure too
    let run = virtualize(&base, &PipelineConfig::default()).unwrap();
    let mut file = run.result.unwrap().to_file();
    file.certificate.as_mut().unwrap().simplices += 1;
    assert!(!verify_file(&file, &base).unwrap().passed);
}

#[test]
fn hyperideal_fixtures_need_no_cover() {
    for (base, simplices) in [(fixtures::double_pyramid(), 4), (fixtures::double_tetrahedron(), 2)] {
        for seed in 0..5 {
            let config = PipelineConfig { order: OrderSpec::Random(seed), ..PipelineConfig::default() };
            let run = virtualize(&base, &config).unwrap();
            assert_eq!(run.report.status, RunStatus::Ok);
            let tri = run.report.triangulation.unwrap();
            assert_eq!(tri.simplices, simplices);
            assert_eq!(tri.at_most_one_ideal, Some(true));
            assert_eq!(run.report.cover.unwrap().degree, 1);
        }
    }
}

#[test]
fn bad_config_rejected() {
    let config = PipelineConfig { max_degree: 0, ..PipelineConfig::default() };
    assert!(virtualize(&fixtures::figure_eight(), &config).is_err());
}
