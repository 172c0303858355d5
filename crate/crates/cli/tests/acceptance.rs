//! The acceptance battery as an integration test target: one test per
//! criterion, each printing its own pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use mfdr::selftest::CRITERIA;

const SEED: u64 = 42;

fn run(index: usize) {
    let (name, check) = CRITERIA[index];
    match check(SEED) {
        Ok(()) => println!("[PASS] criterion {:02}: {name}", index + 1),
        Err(msg) => {
            println!("[FAIL] criterion {:02}: {name}: {msg}", index + 1);
            panic!("criterion {:02} failed: {msg}", index + 1);
        }
    }
}

#[test]
fn criterion_01_exact_expansions() {
    run(0);
}

#[test]
fn criterion_02_eisenstein_g12() {
    run(1);
}

#[test]
fn criterion_03_ramanujan_identities() {
    run(2);
}

#[test]
fn criterion_04_dlog_identity() {
    run(3);
}

#[test]
fn criterion_05_heads_and_tails() {
    run(4);
}

#[test]
fn criterion_06_weight_12_basis() {
    run(5);
}

#[test]
fn criterion_07_round_trips() {
    run(6);
}

#[test]
fn criterion_08_pairing() {
    run(7);
}

#[test]
fn criterion_09_hecke() {
    run(8);
}

#[test]
fn criterion_10_residues() {
    run(9);
}

#[test]
fn criterion_11_slice_model() {
    run(10);
}

#[test]
fn criterion_12_periods() {
    run(11);
}

#[test]
fn criterion_13_integrality() {
    run(12);
}
