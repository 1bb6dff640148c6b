#include "warpfield/geometry_json.hpp"

#include "warpfield/errors.hpp"

namespace warpfield::geometry {

namespace {

using nlohmann::json;

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i).transpose()));
  return a;
}

Eigen::VectorXd read_vec(const json& j, Eigen::Index n, const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
    throw StructuralError(std::string("geometry json: '") + name + "' must be an array of length " +
                          std::to_string(n));
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

Eigen::MatrixXd read_mat(const json& j, Eigen::Index n, const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
    throw StructuralError(std::string("geometry json: '") + name + "' must have " + std::to_string(n) + " rows");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m.row(i) = read_vec(j[static_cast<std::size_t>(i)], n, name).transpose();
  return m;
}

const json& field(const json& j, const char* name) {
  if (!j.contains(name)) throw StructuralError(std::string("geometry json: missing field '") + name + "'");
  return j.at(name);
}

}  // namespace

json to_json(const FRWChart& c) {
  if (c.descriptor() == "power")
    return {{"kind", "power"}, {"amplitude", c.amplitude()}, {"exponent", c.exponent()}, {"t_ref", c.t_ref()}};
  if (c.descriptor() == "exponential") return {{"kind", "exponential"}, {"rate", c.exponent()}, {"t_ref", c.t_ref()}};
  throw UnsupportedError("geometry json: custom scale factors cannot be serialized");
}

std::shared_ptr<const FRWChart> chart_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "power")
    return FRWChart::power(field(j, "amplitude").get<double>(), field(j, "exponent").get<double>(),
                           j.value("t_ref", 1.0));
  if (kind == "exponential") return FRWChart::exponential(field(j, "rate").get<double>(), j.value("t_ref", 0.0));
  throw StructuralError("geometry json: unknown chart kind '" + kind + "'");
}

json to_json(const SpacetimePoint& p) { return {{"backend", to_string(p.backend)}, {"coords", vec(p.coords)}}; }

SpacetimePoint point_from_json(const json& j) {
  const Backend b = backend_from_string(field(j, "backend").get<std::string>());
  const Eigen::Index n = b == Backend::desitter5 ? 5 : 4;
  const Eigen::VectorXd x = read_vec(field(j, "coords"), n, "coords");
  if (b == Backend::desitter5) return SpacetimePoint::desitter(x);
  return {b, x};
}

json to_json(const CanonicalForm& c) {
  return {{"l_minus", vec(c.l_minus)}, {"l_plus", vec(c.l_plus)}, {"base", vec(c.base)}};
}

json to_json(const Wedge& w) {
  json j{{"backend", to_string(w.backend())}};
  switch (w.backend()) {
    case Backend::minkowski4: {
      const MinkowskiDecomposition d = minkowski_decomposition(w);
      j["lorentz"] = mat(w.lorentz());
      j["translation"] = vec(w.translation());
      j["rapidity"] = d.s;
      j["axis_angle"] = vec(d.e);
      j["rotation"] = mat(d.R);
      break;
    }
    case Backend::desitter5: j["ambient"] = mat(w.ambient()); break;
    case Backend::frw: {
      const KillingPair xi = w.killing_pair();
      j["chart"] = to_json(*w.chart());
      j["killing_pair"] = json::array({vec(xi.xi1.tail<3>()), vec(xi.xi2.tail<3>())});
      j["base"] = vec(w.cosmic_base());
      break;
    }
  }
  j["canonical"] = to_json(w.canonical());
  return j;
}

Wedge wedge_from_json(const json& j) {
  const Backend b = backend_from_string(field(j, "backend").get<std::string>());
  switch (b) {
    case Backend::minkowski4: {
      const Vector4 y = j.contains("translation") ? Vector4(read_vec(j["translation"], 4, "translation"))
                        : j.contains("base")      ? Vector4(read_vec(j["base"], 4, "base"))
                                                  : Vector4::Zero();
      if (j.contains("lorentz")) return Wedge::minkowski(read_mat(j["lorentz"], 4, "lorentz"), y);
      if (j.contains("killing_pair")) {
        const json& kp = j["killing_pair"];
        if (!kp.is_array() || kp.size() != 2) throw StructuralError("geometry json: killing_pair needs two vectors");
        return Wedge::minkowski_from_killing_pair(
            {Backend::minkowski4, read_vec(kp[0], 4, "killing_pair"), read_vec(kp[1], 4, "killing_pair")}, y);
      }
      const double s = j.value("rapidity", 0.0);
      const Eigen::Vector3d e = j.contains("axis_angle") ? Eigen::Vector3d(read_vec(j["axis_angle"], 3, "axis_angle"))
                                                         : Eigen::Vector3d::Zero();
      Matrix4 R = Matrix4::Identity();
      if (j.contains("rotation")) R.bottomRightCorner<3, 3>() = read_mat(j["rotation"], 3, "rotation");
      return Wedge::minkowski(R * boost_x1(s) * rotation(e), y);
    }
    case Backend::desitter5: return Wedge::desitter(read_mat(field(j, "ambient"), 5, "ambient"));
    case Backend::frw: {
      const json& kp = field(j, "killing_pair");
      if (!kp.is_array() || kp.size() != 2) throw StructuralError("geometry json: killing_pair needs two vectors");
      const Eigen::VectorXd a = read_vec(kp[0], 3, "killing_pair"), c = read_vec(kp[1], 3, "killing_pair");
      return Wedge::frw(chart_from_json(field(j, "chart")),
                        {Backend::frw, Vector4(0, a[0], a[1], a[2]), Vector4(0, c[0], c[1], c[2])},
                        Vector4(read_vec(field(j, "base"), 4, "base")));
    }
  }
  throw StructuralError("geometry json: unknown backend");
}

}  // namespace warpfield::geometry
