//! Every example in `examples/` runs to completion with its default
//! arguments.

#[allow(dead_code)]
#[path = "../examples/worked_instance.rs"]
mod worked_instance;

#[allow(dead_code)]
#[path = "../examples/padic_symbols.rs"]
mod padic_symbols;

#[allow(dead_code)]
#[path = "../examples/t_matrices.rs"]
mod t_matrices;

#[allow(dead_code)]
#[path = "../examples/igusa_bounds.rs"]
mod igusa_bounds;

#[allow(dead_code)]
#[path = "../examples/reflex_field.rs"]
mod reflex_field;

#[allow(dead_code)]
#[path = "../examples/route_comparison.rs"]
mod route_comparison;

#[allow(dead_code)]
#[path = "../examples/humbert_and_bad_primes.rs"]
mod humbert_and_bad_primes;

#[allow(dead_code)]
#[path = "../examples/field_sweep.rs"]
mod field_sweep;

#[allow(dead_code)]
#[path = "../examples/bm_report_json.rs"]
mod bm_report_json;

#[test]
fn worked_instance_runs() {
    worked_instance::main().unwrap();
}

#[test]
fn padic_symbols_runs() {
    padic_symbols::main().unwrap();
}

#[test]
fn t_matrices_runs() {
    t_matrices::main().unwrap();
}

#[test]
fn igusa_bounds_runs() {
    igusa_bounds::main().unwrap();
}

#[test]
fn reflex_field_runs() {
    reflex_field::run(13).unwrap();
}

#[test]
fn route_comparison_runs() {
    route_comparison::run(13, 200, 15).unwrap();
}

#[test]
fn humbert_and_bad_primes_runs() {
    humbert_and_bad_primes::run(5).unwrap();
}

#[test]
fn field_sweep_runs() {
    field_sweep::run(17, 300).unwrap();
}

#[test]
fn bm_report_json_runs() {
    bm_report_json::run(bm_report_json::DEFAULT_FIELD).unwrap();
}
