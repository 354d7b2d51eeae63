#include "ousector/builtins.hpp"

namespace ousector {

OuModel builtin_model(const std::string& name, double alpha) {
    if (name == "selfadjoint1d") {
        return build_model(StableMatrix::from(Matrix::Constant(1, 1, -1.0)),
                           SpdMatrix::from(Matrix::Constant(1, 1, 2.0)));
    }
    if (name == "rotation") {
        Matrix a(2, 2);
        a << -1.0, alpha, -alpha, -1.0;
        return build_model(StableMatrix::from(a),
                           SpdMatrix::from(2.0 * Matrix::Identity(2, 2)));
    }
    if (name == "anisotropic2d") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = -1.0;
        a(1, 1) = -3.0;
        Matrix q = Matrix::Zero(2, 2);
        q(0, 0) = 2.0;
        q(1, 1) = 6.0;
        return build_model(StableMatrix::from(a), SpdMatrix::from(q));
    }
    if (name == "mixed3") {
        Matrix a(3, 3);
        a << -1.0, 0.5, 0.0,
             -0.5, -1.0, 0.3,
              0.1, -0.3, -2.0;
        Matrix q(3, 3);
        q << 1.0, 0.2, 0.0,
             0.2, 2.0, 0.3,
             0.0, 0.3, 1.5;
        return build_model(StableMatrix::from(a), SpdMatrix::from(q));
    }
    throw ConfigError("unknown builtin model '" + name + "'");
}

std::vector<std::string> builtin_model_names() {
    return {"selfadjoint1d", "rotation", "anisotropic2d", "mixed3"};
}

} // namespace ousector
