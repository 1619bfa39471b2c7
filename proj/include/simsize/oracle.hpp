#pragma once

namespace simsize {

/// Two-arm design with a normally distributed outcome, analysed with a
/// two-sided z-test.
struct OracleSpec {
    double delta = 0.2;  ///< effect size in SD units, nonzero
    double alpha = 0.05; ///< two-sided type I error
    double power = 0.9;
    double f1 = 0.5;     ///< fraction allocated to the first arm

    /// Throws std::domain_error on an invalid spec.
    void validate() const;
};

/// Total (both arms) size reaching spec.power, unrounded:
///   N = (z_{1-alpha/2} + z_power)^2 / (delta^2 f1 (1 - f1)).
double closed_form_total_size(const OracleSpec& spec);

/// Size of one arm under equal allocation: N / 2 at f1 = 0.5.
double closed_form_per_group_size(const OracleSpec& spec);

/// Power at total size N: Phi(-z_{1-alpha/2} + |delta| sqrt(N f1 (1 - f1))).
/// spec.power is ignored.
double closed_form_power(double total_n, const OracleSpec& spec);

}  // namespace simsize
