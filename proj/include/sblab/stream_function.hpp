#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sblab/field.hpp"

namespace sblab {

/// Stream function of a zero-mean solenoidal field: psi_hat = i k x phi_hat / |k|^2,
/// so that curl psi = phi and div psi = 0. Throws "source not solenoidal" when
/// ||div phi||_{L^2} > 1e-8 ||phi||_{L^2} and rejects nonzero-mean sources.
VectorField stream_function(const VectorField& phi);

/// psi shifted so it vanishes at the anchor point: psi(x) - psi(h).
/// The off-grid value psi(h) is trilinearly interpolated.
VectorField modified_stream_function(const VectorField& psi, const Vec3& h);

/// Stream-function pair attached to one source field and anchor.
struct StreamPair {
    VectorField psi;
    VectorField psi_eps;
    Vec3 anchor;
    VectorField source;

    static StreamPair make(const VectorField& phi, const Vec3& anchor);
};

/// Measured ratios behind the modified-stream-function estimates:
/// per radius R, ||psi_eps||_{L^inf(B(h,R))} / (R ||phi||_{H^2}), plus the
/// global ratio ||grad psi||_{H^2} / ||phi||_{H^2}.
struct StreamBoundReport {
    struct Entry {
        double radius;
        double ratio;
    };
    std::vector<Entry> entries;
    double global_grad_ratio = 0.0;
    double cap = 0.0;       // configured acceptance cap on all ratios
    bool pass = false;

    void write(std::ostream& os) const;  // "R=<float> ratio=<float>" lines + global ratio
};

StreamBoundReport verify_lemma21(const VectorField& phi, const Vec3& h, std::span<const double> radii,
                                 double cap = 10.0);

}  // namespace sblab
