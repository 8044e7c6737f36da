// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/serialize.hpp"

#include <fstream>
#include <sstream>

#include "sdirng/error.hpp"

namespace sdirng {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

Json to_json(const Behavior& b) {
  return Json{{"p00", b.p[0][0]}, {"p10", b.p[1][0]}, {"p01", b.p[0][1]}, {"p11", b.p[1][1]}};
}

Behavior behavior_from_json(const Json& j) {
  return guarded("behavior", [&] {
    return Behavior::from_table(j.at("p00").get<double>(), j.at("p10").get<double>(), j.at("p01").get<double>(),
                                j.at("p11").get<double>());
  });
}

Json to_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return Json{{"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  return guarded("matrix", [&] {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const std::size_t r = re.size();
    const std::size_t c = r ? re.at(0).size() : 0;
    require(im.size() == r, ErrorCode::InvalidArgument, "matrix real/imaginary shapes differ");
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      require(re.at(i).size() == c && im.at(i).size() == c, ErrorCode::InvalidArgument, "ragged matrix");
      for (std::size_t k = 0; k < c; ++k) m(i, k) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
    }
    return m;
  });
}

Json to_json(const DualCertificate& c) {
  Json nu = Json::array();
  for (int a = 0; a < 2; ++a) nu.push_back(Json::array({c.nu[a][0], c.nu[a][1]}));
  return Json{{"delta", c.delta}, {"nu", nu}, {"H", Json::array({to_json(c.h[0]), to_json(c.h[1])})}};
}

Json to_json(const DualSolution& s) {
  Json j = to_json(s.cert);
  j["objective"] = s.objective;
  j["margin"] = s.margin;
  return j;
}

DualCertificate certificate_from_json(const Json& j) {
  return guarded("certificate", [&] {
    DualCertificate c;
    c.delta = OverlapBound(j.at("delta").get<double>()).value();
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < 2; ++x) c.nu[a][x] = j.at("nu").at(a).at(x).get<double>();
    for (int l = 0; l < 2; ++l) {
      c.h[l] = matrix_from_json(j.at("H").at(l));
      require(c.h[l].rows() == 2 && c.h[l].cols() == 2, ErrorCode::DimensionMismatch, "H must be 2x2");
    }
    return c;
  });
}

Json to_json(const Dilation& d) {
  return Json{{"dim_m", d.dim_m},
              {"rho", Json::array({to_json(d.rho[0]), to_json(d.rho[1])})},
              {"projector", Json::array({to_json(d.projector[0]), to_json(d.projector[1])})},
              {"sigma", to_json(d.sigma)},
              {"fidelity", d.overlap_fidelity()}};
}

Dilation dilation_from_json(const Json& j) {
  return guarded("dilation", [&] {
    Dilation d;
    d.dim_m = j.at("dim_m").get<std::size_t>();
    for (int i = 0; i < 2; ++i) {
      d.rho[i] = matrix_from_json(j.at("rho").at(i));
      d.projector[i] = matrix_from_json(j.at("projector").at(i));
    }
    d.sigma = matrix_from_json(j.at("sigma"));
    d.validate();
    return d;
  });
}

Json to_json(const ProtocolConfig& c) {
  return Json{{"n", c.n},
              {"p_e", c.p_e},
              {"epsilon", c.epsilon},
              {"extractor", to_string(c.extractor)},
              {"delta", c.delta},
              {"seed", c.seed},
              {"cap_constructible", c.cap_constructible}};
}

ProtocolConfig config_from_json(const Json& j) {
  return guarded("protocol config", [&] {
    ProtocolConfig c;
    c.n = j.value("n", c.n);
    c.p_e = j.value("p_e", c.p_e);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.extractor = extractor_type_from_string(j.value("extractor", std::string(to_string(c.extractor))));
    c.delta = j.value("delta", c.delta);
    c.seed = j.value("seed", c.seed);
    c.cap_constructible = j.value("cap_constructible", c.cap_constructible);
    c.validate();
    return c;
  });
}

Json to_json(const EstimationCounts& c) {
  return Json{{"c00", c.c[0][0]}, {"c10", c.c[1][0]}, {"c01", c.c[0][1]}, {"c11", c.c[1][1]}};
}

Json to_json(const LengthSolution& s) {
  Json alpha = Json::array();
  for (int a = 0; a < 2; ++a) alpha.push_back(Json::array({s.alpha[a][0], s.alpha[a][1]}));
  return Json{{"alpha", alpha},
              {"beta", s.beta},
              {"certificate", to_json(s.certificate)},
              {"objective", s.objective},
              {"m_out", s.m_out},
              {"feasible", s.feasible},
              {"residual", s.residual}};
}

Json to_json(const AsymptoticSolution& s) {
  Json alpha = Json::array();
  for (int a = 0; a < 2; ++a) alpha.push_back(Json::array({s.solution.alpha[a][0], s.solution.alpha[a][1]}));
  Json scan = Json::array();
  for (const auto& [pe, r] : s.scan) scan.push_back(Json::array({pe, r}));
  return Json{{"extractor", to_string(s.extractor)},
              {"p_e", s.p_e},
              {"rate", s.rate},
              {"alpha", alpha},
              {"beta", s.solution.beta},
              {"certificate", to_json(s.solution.certificate)},
              {"scan", scan}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(is);
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidArgument, "cannot parse " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  os << text;
  if (!os) fail(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace sdirng
