//! Parallel census of genus-2 curves over F_3 and of degree-9 curves with
//! 3-rank 0, with cancellation-safe checkpointing.

use newton_strata::search::{run_survey, Family, Filter, SearchSpec, SurveyOptions};

fn main() {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());

    let census = SearchSpec::new(Family::HyperellipticMonic { p: 3, degree: 5 }, Filter::All);
    let result = run_survey(&census, &SurveyOptions::workers(workers)).expect("valid survey");
    println!(
        "hyp:3:5  scanned {}  singular {}",
        result.total_scanned, result.singular
    );
    for (np, n) in result.histogram.as_ref().expect("full pipeline ran") {
        println!("  {np:<24} {n}");
    }

    let dir = std::env::temp_dir().join("newton-strata-census");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let spec = SearchSpec::new(
        Family::HyperellipticMonic { p: 3, degree: 9 },
        Filter::PRankEquals(0),
    );
    let options = SurveyOptions {
        workers,
        checkpoint: Some(dir.join("checkpoint")),
        ..SurveyOptions::default()
    };
    let result = run_survey(&spec, &options).expect("valid survey");
    println!(
        "hyp:3:9 prank=0  scanned {}  matches {}  last chunk {:?}",
        result.total_scanned,
        result.matches.len(),
        result.last_completed_chunk
    );
    for m in result.matches.iter().take(3) {
        println!("{}", m.to_json_line());
    }
}
