#include "casimir/numerics.hpp"

#include <cmath>

namespace casimir::num {

double logdet_spd(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("logdet_spd: matrix not square");

    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw NonConvergence("logdet_spd: factorization failed", 0.0, INFINITY);

    double logdet = 0.0;
    const auto& d = ldlt.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d[i] > 0.0))
            throw NonConvergence("logdet_spd: non-positive pivot", logdet, INFINITY);
        logdet += std::log(d[i]);
    }
    return logdet;
}

}  // namespace casimir::num
