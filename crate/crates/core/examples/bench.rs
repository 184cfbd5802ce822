use permutest_core::harness::run_scenario;
use permutest_core::simgen::ScenarioConfig;
use permutest_core::statistic::StatisticSpec;
use std::time::Instant;

fn main() {
    let mut cfg = ScenarioConfig::basic("bench", 0.0);
    cfg.replications = 4;
    cfg.permutations = 300;
    cfg.statistics = StatisticSpec::catalog_names()[..11].iter().map(|s| s.to_string()).collect();
    let t0 = Instant::now();
    let report = run_scenario(&cfg, 42).unwrap();
    let total = t0.elapsed();
    println!("4 replications, 300 perms, 11 stats: {total:?} ({:?}/rep)", total / 4);
    for row in &report.rows {
        println!("  {:<18} mean eval {:?}", row.statistic, row.mean_eval_time);
    }
}
