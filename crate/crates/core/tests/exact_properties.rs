//! Randomized exact identities of the cochain algebra at full trial counts.

use twixt_core::suite::*;

#[test]
fn delta_squared_full() {
    let v = check_delta_squared(42, 120);
    assert!(v.pass, "{}", v.detail);
}

#[test]
fn dbar_squared_full() {
    let v = check_dbar_squared(42, 120);
    assert!(v.pass, "{}", v.detail);
}

#[test]
fn d_nabla_squared_full() {
    let v = check_d_nabla_squared(42, 60);
    assert!(v.pass, "{}", v.detail);
}

#[test]
fn leibniz_full() {
    let v = check_leibniz(42, 60);
    assert!(v.pass, "{}", v.detail);
}

#[test]
fn associativity_full() {
    let v = check_associativity(42, 60);
    assert!(v.pass, "{}", v.detail);
}

#[test]
fn degree_additivity_full() {
    let v = check_degree_additivity(42, 120);
    assert!(v.pass, "{}", v.detail);
}

#[test]
fn confluence_full() {
    let v = check_normal_form_confluence(42, 150);
    assert!(v.pass, "{}", v.detail);
}

#[test]
fn selectors_full() {
    let v = check_selectors(42, 60);
    assert!(v.pass, "{}", v.detail);
}
