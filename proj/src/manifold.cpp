#include "nsshell/manifold.hpp"

#include <cmath>
#include <numbers>

#include "nsshell/errors.hpp"

namespace nsshell {

double ManifoldConfig::lambda1() const {
    return kind == ManifoldKind::Torus ? 2.0 * std::numbers::pi : std::sqrt(2.0);
}

double ManifoldConfig::ricci_shift() const {
    if (kind == ManifoldKind::Torus) return 0.0;  // flat
    switch (variant) {
        case LaplacianVariant::Hodge: return 0.0;
        case LaplacianVariant::Bochner: return 1.0;
        case LaplacianVariant::Deformation: return 2.0;
    }
    return 0.0;
}

int ManifoldConfig::harmonic_dim() const { return kind == ManifoldKind::Torus ? 2 : 0; }

void ManifoldConfig::validate() const {
    if (!(cutoff > 0.0) || !std::isfinite(cutoff))
        throw ConfigError("cutoff must be positive and finite");
    if (cutoff < lambda1())
        throw ConfigError("cutoff " + std::to_string(cutoff) + " below lambda1 = " +
                          std::to_string(lambda1()));
    if (cutoff <= lambda1())
        throw ConfigError("cutoff retains only the constant mode; the dynamics is empty");
    if (quad_degree < 0) throw ConfigError("quad_degree must be nonnegative");
}

std::string to_string(ManifoldKind kind) {
    return kind == ManifoldKind::Torus ? "torus" : "sphere";
}

std::string to_string(LaplacianVariant variant) {
    switch (variant) {
        case LaplacianVariant::Hodge: return "hodge";
        case LaplacianVariant::Bochner: return "bochner";
        case LaplacianVariant::Deformation: return "deformation";
    }
    return "hodge";
}

ManifoldKind manifold_kind_from_string(const std::string& s) {
    if (s == "torus") return ManifoldKind::Torus;
    if (s == "sphere") return ManifoldKind::Sphere;
    throw ConfigError("unknown manifold kind: " + s);
}

LaplacianVariant laplacian_variant_from_string(const std::string& s) {
    if (s == "hodge") return LaplacianVariant::Hodge;
    if (s == "bochner") return LaplacianVariant::Bochner;
    if (s == "deformation") return LaplacianVariant::Deformation;
    throw ConfigError("unknown laplacian variant: " + s);
}

}  // namespace nsshell
