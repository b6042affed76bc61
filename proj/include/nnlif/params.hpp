#pragma once

// Model constants for the one- and two-population NNLIF network.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nnlif {

/// How neurons leave the refractory compartment.
enum class RefractoryMode {
    Ratio,    // M(t) = R(t) / tau
    Delayed,  // M(t) = N(t - tau)
    None,     // no refractory compartment: outflow is re-injected at V_R immediately
};

enum class Population { E = 0, I = 1 };

std::string_view to_string(RefractoryMode mode);
RefractoryMode refractory_mode_from_string(std::string_view text);

/// Thrown by validate_parameters; what() lists every violated constraint.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Two-population (excitatory/inhibitory) parameters.
///
/// Naming follows "source then target": b_IE is the strength of a spike emitted
/// by population I arriving at population E, D_EI the delay from E to I, and so on.
struct ModelParameters {
    double b_EE = 0.5;
    double b_IE = 0.75;
    double b_II = 0.25;
    double b_EI = 0.5;

    double d_E = 1.0;
    double d_I = 1.0;
    double dcoef_EE = 0.0;
    double dcoef_IE = 0.0;
    double dcoef_II = 0.0;
    double dcoef_EI = 0.0;

    double nu_E_ext = 0.0;

    double D_EE = 0.0;
    double D_IE = 0.0;
    double D_II = 0.0;
    double D_EI = 0.0;

    double tau_E = 0.025;
    double tau_I = 0.025;

    double V_F = 2.0;
    double V_R = 1.0;

    RefractoryMode refractory_mode = RefractoryMode::Ratio;

    double tau(Population pop) const { return pop == Population::E ? tau_E : tau_I; }

    bool operator==(const ModelParameters&) const = default;
};

/// Single population; b > 0 is average-excitatory, b < 0 average-inhibitory.
struct OnePopParameters {
    double b = 0.0;
    double d0 = 1.0;
    double d1 = 0.0;
    double nu_ext = 0.0;
    double tau = 0.025;
    double D = 0.0;
    double V_F = 2.0;
    double V_R = 1.0;
    RefractoryMode refractory_mode = RefractoryMode::Ratio;

    bool operator==(const OnePopParameters&) const = default;
};

const ModelParameters& validate_parameters(const ModelParameters& p);
const OnePopParameters& validate_parameters(const OnePopParameters& p);

/// Mean drive V0 and diffusion a felt by one population for given (delayed) rates.
struct Drive {
    double V0 = 0.0;
    double a = 1.0;
};

/// Mean drive V0^alpha = b_E^alpha N_E - b_I^alpha N_I + (b_E^alpha - b_E^E) nu_E_ext
/// and a_alpha = d_alpha + d_E^alpha N_E + d_I^alpha N_I.
Drive drive(const ModelParameters& p, Population pop, double N_E, double N_I);
/// One population: V0 = b N + nu_ext, a = d0 + d1 N.
Drive drive(const OnePopParameters& p, double N);

}  // namespace nnlif
