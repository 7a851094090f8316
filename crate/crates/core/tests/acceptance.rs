use multiphoton::verify::run_all;

fn main() {
    let seed = std::env::var("MULTIPHOTON_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    let reports = run_all(seed);
    for r in &reports {
        println!("{}", r.summary());
        for c in &r.checks {
            println!("    {c}");
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", reports.len() - failed, reports.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
