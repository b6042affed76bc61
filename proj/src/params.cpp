#include "nnlif/params.hpp"

#include <cmath>
#include <sstream>

namespace nnlif {

std::string_view to_string(RefractoryMode mode) {
    switch (mode) {
    case RefractoryMode::Ratio: return "ratio";
    case RefractoryMode::Delayed: return "delayed";
    case RefractoryMode::None: return "none";
    }
    return "ratio";
}

RefractoryMode refractory_mode_from_string(std::string_view text) {
    if (text == "ratio") return RefractoryMode::Ratio;
    if (text == "delayed") return RefractoryMode::Delayed;
    if (text == "none") return RefractoryMode::None;
    throw std::invalid_argument("unknown refractory mode '" + std::string(text) +
                                "' (expected ratio, delayed or none)");
}

namespace {

std::string join(const std::vector<std::string>& items) {
    std::ostringstream out;
    out << "invalid parameters: ";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out << "; ";
        out << items[i];
    }
    return out.str();
}

class Checker {
public:
    void positive(const char* name, double v) {
        if (!(std::isfinite(v) && v > 0.0)) fail(std::string(name) + " must be > 0");
    }
    void non_negative(const char* name, double v) {
        if (!(std::isfinite(v) && v >= 0.0)) fail(std::string(name) + " must be >= 0");
    }
    void finite(const char* name, double v) {
        if (!std::isfinite(v)) fail(std::string(name) + " must be finite");
    }
    void thresholds(double V_R, double V_F) {
        finite("V_F", V_F);
        finite("V_R", V_R);
        if (!(V_R < V_F)) fail("V_R must be < V_F");
    }
    void fail(std::string message) { violations_.push_back(std::move(message)); }
    void raise_if_any() const {
        if (!violations_.empty()) throw ParameterError(violations_);
    }

private:
    std::vector<std::string> violations_;
};

}  // namespace

ParameterError::ParameterError(std::vector<std::string> violations)
    : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

const ModelParameters& validate_parameters(const ModelParameters& p) {
    Checker c;
    c.positive("b_EE", p.b_EE);
    c.positive("b_IE", p.b_IE);
    c.positive("b_II", p.b_II);
    c.positive("b_EI", p.b_EI);
    c.positive("d_E", p.d_E);
    c.positive("d_I", p.d_I);
    c.non_negative("dcoef_EE", p.dcoef_EE);
    c.non_negative("dcoef_IE", p.dcoef_IE);
    c.non_negative("dcoef_II", p.dcoef_II);
    c.non_negative("dcoef_EI", p.dcoef_EI);
    c.non_negative("nu_E_ext", p.nu_E_ext);
    c.non_negative("D_EE", p.D_EE);
    c.non_negative("D_IE", p.D_IE);
    c.non_negative("D_II", p.D_II);
    c.non_negative("D_EI", p.D_EI);
    c.positive("tau_E", p.tau_E);
    c.positive("tau_I", p.tau_I);
    c.thresholds(p.V_R, p.V_F);
    c.raise_if_any();
    return p;
}

const OnePopParameters& validate_parameters(const OnePopParameters& p) {
    Checker c;
    c.finite("b", p.b);
    c.positive("d0", p.d0);
    c.non_negative("d1", p.d1);
    c.finite("nu_ext", p.nu_ext);
    c.positive("tau", p.tau);
    c.non_negative("D", p.D);
    c.thresholds(p.V_R, p.V_F);
    c.raise_if_any();
    return p;
}

Drive drive(const ModelParameters& p, Population pop, double N_E, double N_I) {
    if (pop == Population::E) {
        return {p.b_EE * N_E - p.b_IE * N_I,
                p.d_E + p.dcoef_EE * N_E + p.dcoef_IE * N_I};
    }
    return {p.b_EI * N_E - p.b_II * N_I + (p.b_EI - p.b_EE) * p.nu_E_ext,
            p.d_I + p.dcoef_EI * N_E + p.dcoef_II * N_I};
}

Drive drive(const OnePopParameters& p, double N) {
    return {p.b * N + p.nu_ext, p.d0 + p.d1 * N};
}

}  // namespace nnlif
