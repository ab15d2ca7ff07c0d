#include "problem_io.hpp"

#include "secular.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dwp {

using nlohmann::json;

std::string num_str(double v) {
  char buf[32];
  auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

namespace {

std::pair<int, int> line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number())
    fail(ErrorCode::Parse, where + ": expected a finite number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(ErrorCode::Parse, where + ": non-finite value");
  return v;
}

Vec get_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::Parse, where + ": expected a nonempty array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = get_number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Mat get_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    fail(ErrorCode::Parse, where + ": expected a nonempty array of rows");
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(ErrorCode::Parse, where + ": rows must be nonempty arrays");
  Mat m(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      fail(ErrorCode::Parse, where + ": rows must be rectangular");
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          get_number(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* status_str(CheckResult::Status s) {
  switch (s) {
    case CheckResult::Status::Pass: return "pass";
    case CheckResult::Status::Fail: return "fail";
    case CheckResult::Status::Skip: return "skip";
  }
  return "unknown";
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    fail(ErrorCode::Parse, "JSON parse error at line " + std::to_string(line) + ", column " +
                               std::to_string(col) + ": " + e.what());
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("JSON error: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::Parse, "problem file must be a JSON object");
  if (!j.contains("form") || !j["form"].is_string())
    fail(ErrorCode::Parse, "missing string field \"form\" (\"general\" or \"reduced\")");
  const std::string form = j["form"].get<std::string>();

  ProblemFile pf;
  if (form == "general") {
    pf.form = ProblemFile::Form::General;
    for (const char* key : {"A", "B", "c", "d", "f"})
      if (!j.contains(key)) fail(ErrorCode::Parse, std::string("general form: missing \"") + key + "\"");
    pf.A = get_matrix(j["A"], "A");
    pf.B = get_matrix(j["B"], "B");
    pf.c = get_vector(j["c"], "c");
    pf.d = get_number(j["d"], "d");
    pf.f = get_vector(j["f"], "f");
  } else if (form == "reduced") {
    pf.form = ProblemFile::Form::Reduced;
    for (const char* key : {"alpha", "psi", "nu"})
      if (!j.contains(key)) fail(ErrorCode::Parse, std::string("reduced form: missing \"") + key + "\"");
    pf.alpha = get_vector(j["alpha"], "alpha");
    pf.psi = get_vector(j["psi"], "psi");
    pf.nu = get_number(j["nu"], "nu");
    if (pf.alpha.size() != pf.psi.size())
      fail(ErrorCode::Parse, "alpha and psi must have the same length");
  } else {
    fail(ErrorCode::Parse, "unknown form \"" + form + "\"");
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Parse, "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string problem_to_json(const ProblemFile& pf) {
  json j;
  if (pf.form == ProblemFile::Form::General) {
    j["form"] = "general";
    j["A"] = mat_to_json(pf.A);
    j["B"] = mat_to_json(pf.B);
    j["c"] = vec_to_json(pf.c);
    j["d"] = pf.d;
    j["f"] = vec_to_json(pf.f);
  } else {
    j["form"] = "reduced";
    j["alpha"] = vec_to_json(pf.alpha);
    j["psi"] = vec_to_json(pf.psi);
    j["nu"] = pf.nu;
  }
  return j.dump(2);
}

PreparedProblem prepare(ProblemFile pf) {
  PreparedProblem pp;
  if (pf.form == ProblemFile::Form::General) {
    pp.general = make_general(pf.A, pf.B, pf.c, pf.d, pf.f);
    Reduction red = reduce(*pp.general);
    pp.reduced = std::move(red.reduced);
    pp.back = std::move(red.back);
    pp.sort_permutation.resize(pp.reduced.n());
    for (int i = 0; i < pp.reduced.n(); ++i) pp.sort_permutation[i] = i;
  } else {
    pp.reduced = make_reduced(pf.alpha, pf.psi, pf.nu, &pp.sort_permutation);
  }
  pp.file = std::move(pf);
  return pp;
}

nlohmann::json point_to_json(const PreparedProblem& pp, const CriticalPoint& cp) {
  json j;
  j["w"] = vec_to_json(cp.w);
  j["norm_sq"] = cp.t;
  j["value"] = cp.value;
  j["kind"] = to_string(cp.kind);
  j["hessian_signature"] = {{"negative", cp.signature.negative},
                            {"zero", cp.signature.zero},
                            {"positive", cp.signature.positive}};
  if (cp.certificate) {
    j["certificate"] = {{"t_star", cp.certificate->t_star},
                        {"h_value", cp.certificate->h_value},
                        {"h_prime", cp.certificate->h_prime},
                        {"bracket", {cp.certificate->bracket_lo, cp.certificate->bracket_hi}}};
  }
  if (pp.is_general()) {
    const Vec x = lift_point(cp.w, *pp.back);
    j["x"] = vec_to_json(x);
    j["pi_value"] = cp.value + pp.back->offset;
  }
  return j;
}

nlohmann::json portrait_to_json(const PreparedProblem& pp, const Portrait& portrait,
                                double grad_tol) {
  json j;
  j["problem"] = {{"form", pp.is_general() ? "general" : "reduced"}, {"n", pp.reduced.n()}};
  j["reduced"] = {{"alpha", vec_to_json(pp.reduced.alpha)},
                  {"psi", vec_to_json(pp.reduced.psi)},
                  {"nu", pp.reduced.nu}};
  bool identity = true;
  for (size_t i = 0; i < pp.sort_permutation.size(); ++i)
    if (pp.sort_permutation[i] != static_cast<int>(i)) identity = false;
  if (!identity) j["sort_permutation"] = pp.sort_permutation;
  if (pp.is_general()) j["offset"] = pp.back->offset;
  j["grad_tol"] = grad_tol;

  json glob;
  glob["variant"] = to_string(portrait.global_set.variant);
  glob["value"] = portrait.global_set.value;
  json pts = json::array();
  for (const auto& cp : portrait.global_set.points) pts.push_back(point_to_json(pp, cp));
  glob["points"] = std::move(pts);
  if (portrait.global_set.sphere) {
    const auto& sp = *portrait.global_set.sphere;
    glob["sphere"] = {{"center", vec_to_json(sp.center)},
                      {"radius", sp.radius},
                      {"free_indices", sp.free_indices}};
  }
  j["global"] = std::move(glob);

  j["local_nonglobal"] =
      portrait.local_nonglobal ? point_to_json(pp, *portrait.local_nonglobal) : json(nullptr);
  j["local_max"] = portrait.local_max ? point_to_json(pp, *portrait.local_max) : json(nullptr);

  json checks = json::array();
  for (const auto& c : portrait.checks)
    checks.push_back({{"name", c.name}, {"status", status_str(c.status)}, {"detail", c.detail}});
  j["checks"] = std::move(checks);
  j["notes"] = portrait.notes;
  j["all_checks_pass"] = portrait.all_checks_pass();
  return j;
}

nlohmann::json reduction_to_json(const PreparedProblem& pp) {
  json j;
  j["reduced"] = {{"alpha", vec_to_json(pp.reduced.alpha)},
                  {"psi", vec_to_json(pp.reduced.psi)},
                  {"nu", pp.reduced.nu}};
  if (pp.is_general()) {
    const auto& bm = *pp.back;
    const Mat BtB = pp.general->B.transpose() * pp.general->B;
    const Mat congA = bm.P.transpose() * pp.general->A * bm.P;
    const Mat congB = bm.P.transpose() * BtB * bm.P;
    Mat residA = congA;
    residA.diagonal() -= pp.reduced.alpha;
    Mat residB = congB - Mat::Identity(congB.rows(), congB.cols());
    j["back_map"] = {{"P", mat_to_json(bm.P)}, {"shift", vec_to_json(bm.shift)},
                     {"offset", bm.offset}};
    j["residuals"] = {{"congruence_A", residA.cwiseAbs().maxCoeff()},
                      {"congruence_B", residB.cwiseAbs().maxCoeff()}};
  } else if (!pp.sort_permutation.empty()) {
    j["sort_permutation"] = pp.sort_permutation;
  }
  return j;
}

std::string sample_secular_csv(const PreparedProblem& pp, double t_lo, double t_hi, int count) {
  require(count >= 2, ErrorCode::Argument, "sample-secular: count must be >= 2");
  require(t_lo < t_hi, ErrorCode::Argument, "sample-secular: invalid range");
  const ReducedDwp& p = pp.reduced;
  const SecularFn s = SecularFn::build(p);

  const double alg1_lo = 2.0 * p.nu - 2.0 * p.alpha_min();
  const double alg2_lo = (p.n() >= 2) ? std::max(2.0 * p.nu - 2.0 * p.alpha[1], 0.0) : 0.0;
  const double alg3_hi = 2.0 * p.nu - 2.0 * p.alpha_max();
  auto region = [&](double t) -> const char* {
    if (t > alg1_lo) return "alg1";
    if (t > alg2_lo && t < alg1_lo) return "alg2";
    if (t >= 0.0 && t < alg3_hi) return "alg3";
    return "outside";
  };

  std::string out = "t,h,h_prime,region\n";
  const double step = (t_hi - t_lo) / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double t = t_lo + step * i;
    bool near_pole = false;
    for (const auto& term : s.terms())
      if (std::abs(t - term.pole) <= 1e-9 * (1.0 + std::abs(term.pole))) near_pole = true;
    if (near_pole) {
      out += "# pole gap at t=" + num_str(t) + "\n";
      continue;
    }
    out += num_str(t) + "," + num_str(s.eval(t)) + "," + num_str(s.prime(t)) + "," + region(t) +
           "\n";
  }
  return out;
}

std::string sample_surface_csv(const PreparedProblem& pp, double lo, double hi, int resolution) {
  const ReducedDwp& p = pp.reduced;
  require(p.n() <= 2, ErrorCode::Unsupported, "sample-surface supports n <= 2");
  require(resolution >= 2, ErrorCode::Argument, "sample-surface: resolution must be >= 2");
  require(lo < hi, ErrorCode::Argument, "sample-surface: invalid range");

  std::string out;
  const double step = (hi - lo) / (resolution - 1);
  if (p.n() == 1) {
    out = "w1,g\n";
    Vec w(1);
    for (int i = 0; i < resolution; ++i) {
      w[0] = lo + step * i;
      out += num_str(w[0]) + "," + num_str(eval_g(w, p)) + "\n";
    }
  } else {
    out = "w1,w2,g\n";
    Vec w(2);
    for (int i = 0; i < resolution; ++i) {
      w[0] = lo + step * i;
      for (int j = 0; j < resolution; ++j) {
        w[1] = lo + step * j;
        out += num_str(w[0]) + "," + num_str(w[1]) + "," + num_str(eval_g(w, p)) + "\n";
      }
    }
  }
  return out;
}

}  // namespace dwp
