mod common;

#[test]
fn dual_is_a_standard_involution() {
    common::dual_is_a_standard_involution();
}

#[test]
fn closure_sums() {
    common::closure_sums();
}

#[test]
fn ranks_are_symmetric() {
    common::ranks_are_symmetric();
}

#[test]
fn oracle_ranks_match_standard_counts() {
    common::oracle_ranks_match_standard_counts();
}

#[test]
fn filtration_vanishing() {
    common::filtration_vanishing();
}

#[test]
fn kernels_match_brute_force() {
    common::kernels_match_brute_force();
}

#[test]
fn ambient_class_times_kernel_vanishes() {
    common::ambient_class_times_kernel_vanishes();
}

#[test]
fn relations_reduce_to_zero() {
    common::relations_reduce_to_zero();
}

#[test]
fn relations_vanish_in_boundary_ring() {
    common::relations_vanish_in_boundary_ring();
}

#[test]
fn relation_multiples_vanish_at_seven() {
    common::relation_multiples_vanish_at_seven();
}

#[test]
fn normal_form_is_multiplicative() {
    common::normal_form_is_multiplicative();
}

#[test]
fn maximal_products_follow_the_sign_rule() {
    common::maximal_products_follow_the_sign_rule();
}

#[test]
fn boundary_ring_ranks_match() {
    common::boundary_ring_ranks_match();
}
