#pragma once

namespace fdkp {

// Linear wave speed c(w) = sqrt((1 + beta w^2) tanh(w) / w), w >= 0.
double wave_speed(double beta, double omega);
double wave_speed_d1(double beta, double omega);
double wave_speed_d2(double beta, double omega);

struct MinSpeed {
    double omega0 = 0.0;
    double c0 = 0.0;
};

// Interior minimiser of c for 0 < beta < 1/3.
MinSpeed find_min_speed(double beta);

struct DsCoefficients {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
};

// a1, a2 are 1/8 of the second derivatives of n along the axes at (omega0, 0),
// by Richardson-extrapolated central differences; a3 = c0 / 4.
DsCoefficients ds_coefficients(double beta, double omega0, double c0);

// m(k) = c(|k|) (1 + 2 k2^2/k1^2)^(1/2); zero on the k1 = 0 column.
double m_symbol(double beta, double k1, double k2);
// n = m - c0, written so that it keeps full relative accuracy near (omega0, 0).
double n_symbol(double beta, double c0, double k1, double k2);

} // namespace fdkp
