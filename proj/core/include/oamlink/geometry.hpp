#pragma once

#include <cstddef>
#include <vector>

#include "oamlink/errors.hpp"
#include "oamlink/vec3.hpp"

namespace oamlink {

struct AntennaPose {
    Vec3 position;
    Vec3 boresight;  // unit pointing direction
};

struct ArrayGeometry {
    std::vector<AntennaPose> tx;
    std::vector<AntennaPose> rx;
};

struct LinkAngles {
    double theta;  // off-boresight angle, rad
    double phi;    // azimuth about the boresight, rad, in (-pi, pi]
};

// Two parallel horizontal uniform linear arrays facing each other across
// `range`, both at `height`. Every boresight points at the opposite array's
// centroid.
ArrayGeometry build_uniform_linear_geometry(std::size_t m, std::size_t n,
                                            double tx_spacing, double rx_spacing,
                                            double range, double height);

// Re-aim element-to-element: tx[i] at rx[i mod n], rx[j] at tx[j mod m].
// Models per-pair alignment of separately steered antennas.
void apply_paired_aiming(ArrayGeometry& geom);

// Euclidean distance rx[n] <- tx[m].
double link_distance(const ArrayGeometry& geom, std::size_t n, std::size_t m);

// Direction of rx[n] seen from tx[m], expressed against tx[m]'s boresight.
// phi is measured from the horizontal axis of the plane orthogonal to the
// boresight; an on-axis link reports phi = 0.
LinkAngles link_angles(const ArrayGeometry& geom, std::size_t n, std::size_t m);

}  // namespace oamlink
