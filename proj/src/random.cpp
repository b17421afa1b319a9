#include "everett/random.hpp"

#include <complex>

#include "everett/errors.hpp"

namespace everett {

Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& engine) {
    if (dim < 1) {
        throw InputError("unitary dimension must be positive");
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd ginibre(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const double re = gauss(engine);
            const double im = gauss(engine);
            ginibre(i, j) = std::complex<double>(re, im);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase convention so the distribution is exactly Haar.
    for (int j = 0; j < dim; ++j) {
        const std::complex<double> d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) {
            q.col(j) *= d / mag;
        }
    }
    return q;
}

}  // namespace everett
