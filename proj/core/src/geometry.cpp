#include "oamlink/geometry.hpp"

#include <cmath>

namespace oamlink {

namespace {

Vec3 centroid(const std::vector<AntennaPose>& poses) {
    Vec3 c;
    for (const auto& p : poses) c = c + p.position;
    return c / static_cast<double>(poses.size());
}

void check_index(const ArrayGeometry& geom, std::size_t n, std::size_t m) {
    if (n >= geom.rx.size() || m >= geom.tx.size())
        throw IndexOutOfRange("link index outside geometry");
}

}  // namespace

ArrayGeometry build_uniform_linear_geometry(std::size_t m, std::size_t n,
                                            double tx_spacing, double rx_spacing,
                                            double range, double height) {
    if (m < 1 || n < 1 || !(tx_spacing > 0.0) || !(rx_spacing > 0.0) ||
        !(range > 0.0) || !(height > 0.0))
        throw InvalidGeometry("array counts and lengths must be positive");

    ArrayGeometry geom;
    geom.tx.resize(m);
    geom.rx.resize(n);
    for (std::size_t i = 0; i < m; ++i)
        geom.tx[i].position = {(static_cast<double>(i) - (m - 1) / 2.0) * tx_spacing,
                               0.0, height};
    for (std::size_t j = 0; j < n; ++j)
        geom.rx[j].position = {(static_cast<double>(j) - (n - 1) / 2.0) * rx_spacing,
                               range, height};

    Vec3 txc = centroid(geom.tx), rxc = centroid(geom.rx);
    for (auto& p : geom.tx) p.boresight = normalized(rxc - p.position);
    for (auto& p : geom.rx) p.boresight = normalized(txc - p.position);
    return geom;
}

void apply_paired_aiming(ArrayGeometry& geom) {
    std::size_t m = geom.tx.size(), n = geom.rx.size();
    if (m == 0 || n == 0) throw InvalidGeometry("empty array");
    for (std::size_t i = 0; i < m; ++i)
        geom.tx[i].boresight = normalized(geom.rx[i % n].position - geom.tx[i].position);
    for (std::size_t j = 0; j < n; ++j)
        geom.rx[j].boresight = normalized(geom.tx[j % m].position - geom.rx[j].position);
}

double link_distance(const ArrayGeometry& geom, std::size_t n, std::size_t m) {
    check_index(geom, n, m);
    return norm(geom.rx[n].position - geom.tx[m].position);
}

LinkAngles link_angles(const ArrayGeometry& geom, std::size_t n, std::size_t m) {
    check_index(geom, n, m);
    Vec3 delta = geom.rx[n].position - geom.tx[m].position;
    double dist = norm(delta);
    if (!(dist > 0.0)) throw DegenerateDirection("rx coincides with tx");
    Vec3 u = delta / dist;
    Vec3 b = geom.tx[m].boresight;

    double c = dot(u, b);
    c = std::max(-1.0, std::min(1.0, c));
    double theta = std::acos(c);

    // Horizontal reference axis in the plane orthogonal to the boresight.
    Vec3 xhat{1.0, 0.0, 0.0};
    Vec3 href = xhat - b * dot(xhat, b);
    if (norm(href) < 1e-12) {
        Vec3 yhat{0.0, 1.0, 0.0};
        href = yhat - b * dot(yhat, b);
    }
    href = normalized(href);
    Vec3 vref = cross(b, href);

    double pu = dot(u, href), pv = dot(u, vref);
    if (std::abs(pu) < 1e-15 && std::abs(pv) < 1e-15)
        return {theta, 0.0};  // on-axis: azimuth defined as 0
    double phi = std::atan2(pv, pu);
    if (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
    return {theta, phi};
}

}  // namespace oamlink
