#include "circlelab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circlelab {

namespace {

struct Recorder {
  std::vector<IdentityResidual>& report;

  void add(const std::string& name, double residual) {
    for (auto& entry : report) {
      if (entry.name == name) {
        entry.max_abs = std::max(entry.max_abs, std::abs(residual));
        return;
      }
    }
    report.push_back({name, std::abs(residual)});
  }
};

}  // namespace

std::vector<IdentityResidual> verify_appendix_a(const AngleState& s,
                                                std::span<const double> theta_ddot) {
  const std::size_t N = s.size();
  if (theta_ddot.size() != N)
    throw std::invalid_argument("theta_ddot length must match the state");

  // Guards for the tan-line group.
  for (std::size_t n = 0; n < N; ++n) {
    if (std::abs(std::cos(s.theta(n))) <= 1e-6)
      throw TangentSingularity("theta_" + std::to_string(n) + " too close to pi/2 mod pi");
  }
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t m = n + 1; m < N; ++m)
      if (std::abs(std::sin(s.theta(n) - s.theta(m))) <= 1e-6)
        throw CollisionSingularity("particles " + std::to_string(n) + " and " +
                                   std::to_string(m) + " collide");

  std::vector<IdentityResidual> report;
  Recorder rec{report};

  // Vector-side objects built once from (theta, theta_dot, theta_ddot).
  const CircleState c = angle_to_circle(s);
  std::vector<Vec2> rdd(N);
  for (std::size_t n = 0; n < N; ++n)
    rdd[n] = theta_ddot[n] * perp(c.r(n)) - (s.theta_dot(n) * s.theta_dot(n)) * c.r(n);

  // Line-side objects via the chain rule on z = tan(theta), so the left-hand
  // routes below never evaluate the 1/cos^2 closed forms they are checked
  // against.
  std::vector<double> z(N), zd(N), zdd(N);
  for (std::size_t n = 0; n < N; ++n) {
    z[n] = std::tan(s.theta(n));
    zd[n] = s.theta_dot(n) * (1.0 + z[n] * z[n]);
    zdd[n] = theta_ddot[n] * (1.0 + z[n] * z[n]) + 2.0 * s.theta_dot(n) * z[n] * zd[n];
  }

  for (std::size_t n = 0; n < N; ++n) {
    const Vec2 r = c.r(n);
    const Vec2 rd = c.r_dot(n);
    const double th = s.theta(n);
    const double td = s.theta_dot(n);
    const double tdd = theta_ddot[n];
    const double cs = std::cos(th);
    const double sn = std::sin(th);

    rec.add("r.r = 1", dot(r, r) - 1.0);
    rec.add("rdot.r = 0", dot(rd, r));
    rec.add("rdot.rdot = thdot^2", dot(rd, rd) - td * td);
    rec.add("(r^rdot).z = thdot", cross(r, rd) - td);
    rec.add("rddot.r = -thdot^2", dot(rdd[n], r) + td * td);
    rec.add("rddot.(z^r) = thddot", dot(rdd[n], perp(r)) - tdd);

    const Vec2 lhs6 = perp(rd) + td * r;  // z^rdot = -thdot r
    rec.add("z^rdot = -thdot r", std::max(std::abs(lhs6.x), std::abs(lhs6.y)));
    const Vec2 lhs7 = perp(rdd[n]) + tdd * r + (td * td) * perp(r);
    rec.add("z^rddot = -thddot r - thdot^2 z^r", std::max(std::abs(lhs7.x), std::abs(lhs7.y)));

    rec.add("zdot = thdot/cos^2", zd[n] - td / (cs * cs));
    rec.add("zddot = (thddot + 2 thdot^2 tan)/cos^2",
            zdd[n] - (tdd + 2.0 * td * td * std::tan(th)) / (cs * cs));

    for (std::size_t m = 0; m < N; ++m) {
      if (m == n) continue;
      const Vec2 rm = c.r(m);
      const Vec2 rmd = c.r_dot(m);
      const double thm = s.theta(m);
      const double tdm = s.theta_dot(m);
      const double d = th - thm;
      const double sd = std::sin(d);
      const double cd = std::cos(d);
      const double csm = std::cos(thm);
      const double snm = std::sin(thm);

      rec.add("rn.rm = cos(d)", dot(r, rm) - cd);
      rec.add("(rm^rn).z = sin(d)", cross(rm, r) - sd);
      rec.add("rndot.rm = -thdot sin(d)", dot(rd, rm) + td * sd);
      rec.add("rndot.rmdot = thdot thdot cos(d)", dot(rd, rmd) - td * tdm * cd);
      rec.add("(rndot^rm).z = -thdot cos(d)", cross(rd, rm) + td * cd);
      rec.add("(rndot^rmdot).z = -thdot thdot sin(d)", cross(rd, rmd) + td * tdm * sd);

      rec.add("zn-zm = sin(d)/(cos cos)", (z[n] - z[m]) - sd / (cs * csm));
      rec.add("1/(zn-zm) = cos cos/sin(d)", 1.0 / (z[n] - z[m]) - cs * csm / sd);
      rec.add("zndot zm = thdot sin/(cos^2 cos)", zd[n] * z[m] - td * snm / (cs * cs * csm));
      rec.add("zndot zmdot = thdot thdot/(cos^2 cos^2)",
              zd[n] * zd[m] - td * tdm / (cs * cs * csm * csm));
      rec.add("(zndot+zmdot)/(zn-zm)",
              (zd[n] + zd[m]) / (z[n] - z[m]) - (td * csm * csm + tdm * cs * cs) / (cs * csm * sd));
      rec.add("(zndot zm + zmdot zn)/(zn-zm)",
              (zd[n] * z[m] + zd[m] * z[n]) / (z[n] - z[m]) -
                  (td * snm * csm + tdm * sn * cs) / (cs * csm * sd));
      rec.add("zndot zmdot/(zn-zm)",
              zd[n] * zd[m] / (z[n] - z[m]) - td * tdm / (cs * csm * sd));
    }
  }
  return report;
}

double max_residual(const std::vector<IdentityResidual>& report) {
  double worst = 0.0;
  for (const auto& entry : report) worst = std::max(worst, entry.max_abs);
  return worst;
}

}  // namespace circlelab
