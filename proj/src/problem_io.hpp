#pragma once

// Problem-file parsing (JSON, general or reduced form), report serialization,
// and the CSV sampling surfaces used for plotting.

#include "model.hpp"
#include "reduction.hpp"
#include "solvers.hpp"
#include "types.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dwp {

struct ProblemFile {
  enum class Form { General, Reduced };
  Form form = Form::Reduced;
  // general form
  Mat A, B;
  Vec c, f;
  double d = 0.0;
  // reduced form, exactly as given (possibly unsorted)
  Vec alpha, psi;
  double nu = 0.0;
};

// Throws Error(Parse) with a line:column diagnostic on malformed input.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);
std::string problem_to_json(const ProblemFile& pf);

// Validated problem in canonical reduced coordinates.
struct PreparedProblem {
  ProblemFile file;
  ReducedDwp reduced;
  std::optional<GeneralDwp> general;
  std::optional<BackMap> back;        // general form only
  std::vector<int> sort_permutation;  // canonical[i] = input[perm[i]]

  bool is_general() const { return general.has_value(); }
};

PreparedProblem prepare(ProblemFile pf);

nlohmann::json point_to_json(const PreparedProblem& pp, const CriticalPoint& cp);
nlohmann::json portrait_to_json(const PreparedProblem& pp, const Portrait& portrait,
                                double grad_tol);
nlohmann::json reduction_to_json(const PreparedProblem& pp);

// CSV with header `t,h,h_prime,region`; rows inside the pole guard are
// replaced by `# pole gap ...` comment lines.
std::string sample_secular_csv(const PreparedProblem& pp, double t_lo, double t_hi, int count);

// Uniform grid of g over [lo,hi]^n, n <= 2. Header `w1,g` or `w1,w2,g`.
std::string sample_surface_csv(const PreparedProblem& pp, double lo, double hi, int resolution);

// Locale-independent shortest round-trip formatting.
std::string num_str(double v);

}  // namespace dwp
