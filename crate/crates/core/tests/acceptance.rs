//! Runs every acceptance criterion and prints one line per criterion.

use abcone::verify;

#[test]
fn acceptance_suite() {
    let reports = verify::run_all();
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("{} of {} criteria passed", reports.len() - failed.len(), reports.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
