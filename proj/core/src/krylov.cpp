#include "fdkp/krylov.hpp"

#include <cmath>
#include <vector>

#include "fdkp/errors.hpp"

namespace fdkp {

namespace {

double dot(const Field& a, const Field& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    return s;
}

double nrm(const Field& a) { return std::sqrt(dot(a, a)); }

} // namespace

GmresResult gmres(const LinearOp& A, const Field& b, const LinearOp& precond, const GmresOptions& opt)
{
    GmresResult res;
    res.x = b;
    for (auto& v : res.x.values) v = 0.0;
    const double bnorm = nrm(b);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    const int m = std::max(1, opt.restart);
    int total = 0;
    Field r = b;
    while (true) {
        const double beta = nrm(r);
        res.relResidual = beta / bnorm;
        if (res.relResidual <= opt.rtol) {
            res.converged = true;
            break;
        }
        if (total >= opt.maxIter) break;

        std::vector<Field> V, Z;
        std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
        std::vector<double> cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);
        V.push_back(scaled(r, 1.0 / beta));
        g[0] = beta;
        int k = 0;
        for (; k < m && total < opt.maxIter; ++k) {
            Z.push_back(precond ? precond(V[k]) : V[k]);
            Field w = A(Z[k]);
            ++total;
            for (int i = 0; i <= k; ++i) {
                H[i][k] = dot(w, V[i]);
                axpy(w, -H[i][k], V[i]);
            }
            // second pass keeps the basis orthogonal when the operator is nearly singular
            for (int i = 0; i <= k; ++i) {
                const double h = dot(w, V[i]);
                H[i][k] += h;
                axpy(w, -h, V[i]);
            }
            H[k + 1][k] = nrm(w);
            for (int i = 0; i < k; ++i) {
                const double t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
                H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
                H[i][k] = t;
            }
            const double den = std::hypot(H[k][k], H[k + 1][k]);
            const double hk1 = H[k + 1][k];
            cs[k] = den > 0.0 ? H[k][k] / den : 1.0;
            sn[k] = den > 0.0 ? hk1 / den : 0.0;
            H[k][k] = den;
            H[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            const bool breakdown = hk1 <= 1e-300;
            if (!breakdown) V.push_back(scaled(w, 1.0 / hk1));
            if (std::abs(g[k + 1]) / bnorm <= opt.rtol || breakdown) {
                ++k;
                break;
            }
        }
        std::vector<double> y(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
            y[i] = H[i][i] != 0.0 ? s / H[i][i] : 0.0;
        }
        for (int i = 0; i < k; ++i) axpy(res.x, y[i], Z[i]);
        res.iterations = total;

        r = A(res.x);
        for (std::size_t q = 0; q < r.size(); ++q) r[q] = b[q] - r[q];
        if (!std::isfinite(nrm(r))) throw LinearSolveStagnation("GMRES produced a non-finite residual");
    }
    res.iterations = total;
    return res;
}

} // namespace fdkp
