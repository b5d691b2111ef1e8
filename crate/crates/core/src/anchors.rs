//! Source anchors carried into reports, keyed by entry id.
//!
//! Anchors are report data: every residual the engine emits names the
//! display it checks. Keeping them in one table keeps ids and anchors in
//! sync across modules.

const TABLE: &[(&str, &str)] = &[
    // structure axioms
    ("f2_structure", "Eq. (2.1)"),
    ("eta_xi_delta", "Eq. (2.1) (eta^i(xi_j) = delta)"),
    ("Q_xi", "Eq. (2.1) (Q xi_i = xi_i)"),
    ("metric_compat", "Eq. (2.2)"),
    ("f_skew", "Def. D-basic (f skew-symmetric)"),
    ("Q_self_adjoint", "Def. D-basic (Q self-adjoint)"),
    ("xi_orthonormal", "Def. D-basic (xi_i orthonormal)"),
    ("rank_f", "Def. D-basic (rank f = 2n)"),
    ("D_f_invariant", "D = f(TM) display"),
    ("f_xi", "f xi_i = 0 display"),
    ("eta_f", "eta^i o f = 0 display"),
    ("eta_Q", "eta^i o Q = eta^i display"),
    ("Q_f_commute", "[Q, f] = 0 display"),
    ("eta_g_dual", "eta^i(X) = g(X, xi_i) (Eq. (2.2) with Y = xi_i)"),
    ("tangent_splitting", "TM = D + ker f display"),
    // classes
    ("weak_metric_f", "Eqs. (2.1)-(2.2)"),
    ("weak_almost_K", "Def. weak almost K (dPhi = 0)"),
    ("weak_almost_C", "Def. weak almost C (i)"),
    ("weak_almost_S", "Eq. (2.3)"),
    ("normal", "N(1) display"),
    ("weak_K", "Def. weak K/C/S (+ normality)"),
    ("weak_C", "Def. weak K/C/S (+ normality)"),
    ("weak_S", "Def. weak K/C/S (+ normality)"),
    ("weak_nearly_S", "Eq. (E-nS-01)"),
    ("weak_nearly_C", "Eq. (E-nS-01b)"),
    ("S_structure", "Eq. (3.1A)"),
    ("f_K_contact", "Def. weak f-K-contact (Killing display)"),
    // structure tensors
    ("N1", "N(1) display"),
    ("N2", "N(2)_i display"),
    ("N3", "N(3)_i display"),
    ("N4", "N(4)_ij display"),
    // frame conditions
    ("xi_brackets", "Eq. (E-30b-xi)"),
    ("g_nabla_xi_xi", "Eq. (E-30-xi)"),
    ("eta_nabla_xi_xi", "Eq. (E-30c-xi)"),
    ("q_parallel_D", "Eq. (E-nS-10)"),
    ("q_parallel_identity", "Eq. (E-nS-10b)"),
    ("killing", "Eq. (Eq-normal-5)"),
    // theorem checks
    ("nabla_xi_xi", "Eq. (E-nS-xixi)"),
    ("nabla_xi_eta", "Eq. (E-nS-xieta)"),
    ("nabla_xi_plus_f", "Eq. (E-nabla-xi)"),
    ("nabla_xi_zero", "Th-4.1 (nabla xi_i = 0)"),
    ("E-c-01b", "Eq. (E-c-01b)"),
    ("d_eta_on_D", "Eq. (E-c-01b)"),
    ("D_totally_geodesic", "Th-4.1 proof (g(nabla_X Y, xi_i) = 0)"),
    ("d_eta_eq_Phi_Q", "Th-01(i)"),
    ("eta_N1_expansion", "Th-01 proof (i)"),
    ("eta_N1_chain", "Th-01 proof (i)"),
    ("N1_eq_2Phi_Qtilde", "Th-01(ii)"),
    ("dPhi_expansion", "Th-01 proof (ii)"),
    ("S_nabla_f", "Eq. (3.1A)"),
    ("lie_xi_f", "Eq. (Eq-normal-2)"),
    ("d_eta_xi", "Eq. (Eq-normal-2)"),
    ("d_eta_f_Qtilde", "Eq. (Eq-normal-3)"),
    ("nabla_xi_xi_in_D", "Eq. (Eq-normal-4)"),
    ("bracket_D_xi_in_D", "Eq. (Eq-normal-4)"),
    ("ker_f_totally_geodesic", "Prop. 2.1 (ker f totally geodesic)"),
    ("K_xi_positive", "Thm 3.2 proof (K(xi,X) > 0)"),
    ("nested_vs_tensor", "Thm 3.2 proof (curvature display)"),
    ("step1_K_vs_nested", "Thm 3.2 proof (first equality)"),
    ("step2_nabla_xi", "Thm 3.2 proof, Eq. (E-nabla-xi)"),
    ("step3_nearly_C", "Thm 3.2 proof, Eq. (E-nS-01b)"),
    ("step4_f_xi", "Thm 3.2 proof (third equality)"),
    ("step5_nabla_xi", "Thm 3.2 proof, Eq. (E-nabla-xi)"),
    ("K_minus_2g_f2XX", "Thm 3.2 proof (= 2 g(f^2 X, X))"),
    ("sign_g_f2XX", "Thm 3.2 proof (g(f^2 X, X) <= 0)"),
    ("nearly_C_hypothesis", "Eq. (E-nS-01b)"),
    ("prop1", "Prop. 1"),
    ("fk_contact_nabla", "Eq. (E-nabla-xi)"),
    ("thm32_chain", "Thm 3.2"),
    ("thm41", "Th-4.1"),
    ("thm01_i", "Th-01(i)"),
    ("thm01_ii", "Th-01(ii)"),
    ("corollary_rigidity", "Corollary (normal weak nearly S with Q = id is S), Eq. (3.1A)"),
    ("normal_props", "Prop. 2.1"),
    // submanifolds
    ("ambient_nearly_kahler", "Eq. (Eq-NS-9)"),
    ("E-NN", "Eq. (E-NN)"),
    ("E-AA-cond", "Eq. (E-AA-cond)"),
    ("Eq-NS-4(i)", "Eq. (Eq-NS-4) (i)"),
    ("Eq-NS-4(ii)", "Eq. (Eq-NS-4) (ii)"),
    ("Eq-NS-4A(i)", "Eq. (Eq-NS-4A) (i)"),
    ("Eq-NS-4A(ii)", "Eq. (Eq-NS-4A) (ii)"),
    ("Eq-NS-4_vs_4A", "Eqs. (Eq-NS-4) / (Eq-NS-4A)"),
    ("Eq-NS-7", "Eq. (Eq-NS-7)"),
    ("Eq-NS-7A", "Eq. (Eq-NS-7A)"),
    ("Eq-NS-7B", "Eq. (Eq-NS-7B)"),
    ("conclusion_weak_nearly_S", "Th-subm (i), Eq. (E-nS-01)"),
    ("conclusion_weak_nearly_C", "Th-subm (ii), Eq. (E-nS-01b)"),
    ("induced_axioms", "Lemma L-nS-01, Eqs. (2.1)-(2.2)"),
    ("f2_expansion", "Lemma L-nS-01 proof (f^2 X = -QX + sum eta^i(X) xi_i)"),
    ("h_symmetric", "Eq. (Eq-NS-5)"),
    ("gauss_split", "Eq. (Eq-NS-5)"),
    ("weingarten_duality", "h_N = g(A_N X, Y) display"),
    ("f2_normal_perp", "Lemma L-nS-01 (f^2 N_i perp TM)"),
    ("nabla_f2_tangential", "Lemma L-nS-01 (((nabla_X f^2)Y)^T = 0)"),
    ("lemma_q_parallel", "Lemma L-nS-01, Eq. (E-nS-10)"),
];

/// Anchor for an entry id, or an empty string for ids without one.
pub fn anchor(id: &str) -> &'static str {
    TABLE
        .iter()
        .find(|(k, _)| *k == id)
        .map_or("", |(_, a)| a)
}
