#pragma once

#include <functional>

#include "nonholo/propagator.hpp"

namespace nonholo {

// Fills row `row` of the kernel into `out` (length = kernel.cols()).
// Must be a pure function of the row index.
using RowFiller = std::function<void(int row, double* out)>;

// Serial and OpenMP row loops. Both produce bit-identical kernels because
// each row is computed independently and written once.
void assemble_rows(Mat& kernel, const RowFiller& fill, Execution exec);

// y = K v for a dense kernel.
Vec apply_dense(const Mat& kernel, const Vec& v, Execution exec);

// y = K v for an azimuthally invariant kernel stored as its phi = 0 rows
// (see SlicedPropagator).
Vec apply_azimuthal(const Mat& rows, int n_theta, int n_phi, const Vec& v, Execution exec);

}  // namespace nonholo
