use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use newton_strata::curves::{self, CurveKind, CurveModel};
use newton_strata::polygon::{NewtonPolygon, Slope};
use newton_strata::search::{analyze, run_survey, Family, Filter, SearchSpec, SurveyOptions};
use newton_strata::zeta::{l_from_counts, LPolynomial};

/// Single-threaded loop over every monic quintic over F_3, with the counts
/// done by brute force over each extension field.
fn naive_quintics(filter: &Filter) -> Vec<(String, NewtonPolygon)> {
    let mut out = Vec::new();
    for i in 0..243u64 {
        let mut f: Vec<u64> = (0..5).map(|j| i / 3u64.pow(j) % 3).collect();
        f.push(1);
        let Ok(model) = CurveModel::hyperelliptic(3, &f) else {
            continue;
        };
        let counts = curves::count_profile(&model, 2).unwrap();
        let l = l_from_counts(&counts, 2).unwrap();
        let np = newton_strata::polygon::np_from_l(&l).unwrap();
        let keep = match filter {
            Filter::PRankEquals(r) => np.p_rank() == *r,
            Filter::PolygonEquals(t) => &np == t,
            Filter::Supersingular => np.entries().all(|(s, _)| s == Slope::HALF),
            Filter::All => true,
        };
        if keep {
            out.push((model.to_string(), np));
        }
    }
    out
}

#[test]
fn survey_matches_naive_loop_on_quintics() {
    let filters = [
        Filter::All,
        Filter::PRankEquals(0),
        Filter::PRankEquals(1),
        Filter::PRankEquals(2),
        Filter::Supersingular,
        Filter::PolygonEquals("1*(0)+2*(1/2)+1*(1)".parse().unwrap()),
    ];
    for filter in filters {
        let expected = naive_quintics(&filter);
        for workers in [1, 3] {
            let spec = SearchSpec {
                chunk_size: 16,
                ..SearchSpec::new(
                    Family::HyperellipticMonic { p: 3, degree: 5 },
                    filter.clone(),
                )
            };
            let r = run_survey(&spec, &SurveyOptions::workers(workers)).unwrap();
            let got: Vec<(String, NewtonPolygon)> = r
                .matches
                .iter()
                .map(|m| (m.curve.to_string(), m.polygon.clone()))
                .collect();
            assert_eq!(got, expected, "{filter}");
            assert_eq!(r.total_scanned, 243);
            assert!(r.complete);
        }
    }
}

#[test]
fn records_are_self_verifying() {
    let spec = SearchSpec::new(
        Family::HyperellipticMonic { p: 3, degree: 7 },
        Filter::PRankEquals(1),
    )
    .with_limit(20);
    let r = run_survey(&spec, &SurveyOptions::workers(2)).unwrap();
    assert_eq!(r.matches.len(), 20);
    for m in &r.matches {
        let v: serde_json::Value = serde_json::from_str(&m.to_json_line()).unwrap();
        let curve: CurveModel = v["curve"].as_str().unwrap().parse().unwrap();
        let l: LPolynomial = serde_json::from_value(v["L"].clone()).unwrap();
        let np: NewtonPolygon = serde_json::from_value(v["polygon"].clone()).unwrap();
        let again = analyze(&curve).unwrap();
        assert_eq!(again.l, l);
        assert_eq!(again.polygon, np);
        assert_eq!(v["p_rank"], 1);
    }
}

#[test]
fn degree_nine_polygon_filter() {
    let target: NewtonPolygon = "4*(1/4)+4*(3/4)".parse().unwrap();
    let spec = SearchSpec::new(
        Family::HyperellipticMonic { p: 3, degree: 9 },
        Filter::PolygonEquals(target.clone()),
    );
    let r = run_survey(&spec, &SurveyOptions::workers(4)).unwrap();
    assert!(!r.matches.is_empty());
    assert!(r
        .matches
        .iter()
        .any(|m| m.curve.defining_poly() == [0, 1, 1, 2, 1, 2, 1, 1, 0, 1]));
    for m in r.matches.iter().take(10) {
        assert_eq!(analyze(&m.curve).unwrap().polygon, target);
    }
    // histogram masses plus singular candidates account for every candidate
    let hist = r.histogram.unwrap();
    assert_eq!(hist.values().sum::<u64>() + r.singular, 19683);
    assert_eq!(hist[&target.to_string()], r.matches.len() as u64);
}

#[test]
fn limit_is_independent_of_chunking_and_workers() {
    let base = SearchSpec::new(
        Family::HyperellipticMonic { p: 5, degree: 5 },
        Filter::Supersingular,
    )
    .with_limit(7);
    let mut results = Vec::new();
    for (chunk, workers) in [(1, 1), (13, 4), (256, 8), (5000, 2)] {
        let spec = SearchSpec {
            chunk_size: chunk,
            ..base.clone()
        };
        let r = run_survey(&spec, &SurveyOptions::workers(workers)).unwrap();
        results.push((r.total_scanned, r.singular, r.matches));
    }
    assert!(results.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(results[0].2.len(), 7);
}

#[test]
fn artin_schreier_support_family() {
    // h = x^7 + a x^5 + b x^3 + c x over F_2
    let family = Family::ArtinSchreier {
        p: 2,
        degree: 7,
        support: Some(vec![1, 3, 5]),
    };
    let spec = SearchSpec::new(family, Filter::All);
    let r = run_survey(&spec, &SurveyOptions::workers(2)).unwrap();
    assert_eq!(r.total_scanned, 8);
    assert_eq!(r.singular, 0);
    for m in &r.matches {
        assert_eq!(m.curve.kind(), CurveKind::ArtinSchreier);
        assert_eq!(m.curve.genus(), 3);
        assert_eq!(m.polygon.p_rank(), 0);
    }
}

#[test]
fn cancellation_mid_survey_is_a_valid_prefix() {
    let cancel = Arc::new(AtomicBool::new(false));
    let spec = SearchSpec {
        chunk_size: 1,
        ..SearchSpec::new(Family::HyperellipticMonic { p: 3, degree: 7 }, Filter::All)
    };
    let flag = cancel.clone();
    let trigger = std::thread::spawn(move || {
        std::thread::sleep(std::time::Duration::from_millis(5));
        flag.store(true, Ordering::SeqCst);
    });
    let partial = run_survey(
        &spec,
        &SurveyOptions {
            workers: 2,
            cancel: Some(cancel),
            ..SurveyOptions::default()
        },
    )
    .unwrap();
    trigger.join().unwrap();
    let full = run_survey(&spec, &SurveyOptions::workers(2)).unwrap();
    let n = partial.matches.len();
    assert_eq!(partial.matches[..], full.matches[..n]);
    let scanned_chunks = partial.last_completed_chunk.map_or(0, |c| c + 1);
    assert_eq!(partial.total_scanned, scanned_chunks);
    if !partial.complete {
        assert!(partial.total_scanned < 3u64.pow(7));
    }
}
