#include "dwp.h"

#include "problem_io.hpp"
#include "solvers.hpp"
#include "verify.hpp"

#include <cstring>
#include <string>

struct dwp_problem_s {
  dwp::PreparedProblem prepared;
};

namespace {

thread_local std::string g_last_error;

int code_of(const dwp::Error& e) {
  switch (e.code()) {
    case dwp::ErrorCode::Argument: return DWP_ERR_ARGUMENT;
    case dwp::ErrorCode::Parse: return DWP_ERR_PARSE;
    case dwp::ErrorCode::NotPositiveDefinite: return DWP_ERR_NOT_POSITIVE_DEFINITE;
    case dwp::ErrorCode::Unsupported: return DWP_ERR_UNSUPPORTED;
    case dwp::ErrorCode::PoleEvaluation:
    case dwp::ErrorCode::EmptyInterval:
    case dwp::ErrorCode::Numeric: return DWP_ERR_NUMERIC;
    case dwp::ErrorCode::Internal: return DWP_ERR_INTERNAL;
  }
  return DWP_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DWP_OK;
  } catch (const dwp::Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DWP_ERR_INTERNAL;
  }
}

void emit(char** dst, const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  *dst = out;
}

}  // namespace

extern "C" {

int dwp_problem_from_file(const char* path, dwp_problem** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    auto* h = new dwp_problem_s{dwp::prepare(dwp::load_problem(path))};
    *out = h;
  });
}

int dwp_problem_from_json(const char* text, dwp_problem** out) {
  if (!text || !out) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    auto* h = new dwp_problem_s{dwp::prepare(dwp::parse_problem(text))};
    *out = h;
  });
}

void dwp_problem_free(dwp_problem* problem) { delete problem; }

int dwp_problem_dim(const dwp_problem* problem, int* n_out) {
  if (!problem || !n_out) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  *n_out = problem->prepared.reduced.n();
  return DWP_OK;
}

int dwp_problem_is_general(const dwp_problem* problem, int* general_out) {
  if (!problem || !general_out) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  *general_out = problem->prepared.is_general() ? 1 : 0;
  return DWP_OK;
}

int dwp_problem_to_json(const dwp_problem* problem, char** json_out) {
  if (!problem || !json_out) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  return guarded([&] {
    emit(json_out, dwp::problem_to_json(problem->prepared.file));
  });
}

int dwp_solve(const dwp_problem* problem, double grad_tol, char** json_out) {
  if (!problem || !json_out) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  return guarded([&] {
    dwp::SolveOptions opts;
    if (grad_tol > 0.0) opts.grad_tol = grad_tol;
    const dwp::Portrait portrait = dwp::solve_portrait(problem->prepared.reduced, opts);
    const auto j = dwp::portrait_to_json(problem->prepared, portrait,
                                         dwp::grad_tolerance(problem->prepared.reduced, opts));
    emit(json_out, j.dump(2));
  });
}

int dwp_reduce(const dwp_problem* problem, char** json_out) {
  if (!problem || !json_out) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  return guarded([&] {
    emit(json_out, dwp::reduction_to_json(problem->prepared).dump(2));
  });
}

int dwp_sample_secular(const dwp_problem* problem, double t_lo, double t_hi, int count,
                       char** csv_out) {
  if (!problem || !csv_out) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  return guarded([&] {
    emit(csv_out, dwp::sample_secular_csv(problem->prepared, t_lo, t_hi, count));
  });
}

int dwp_sample_surface(const dwp_problem* problem, double lo, double hi, int resolution,
                       char** csv_out) {
  if (!problem || !csv_out) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  return guarded([&] {
    emit(csv_out, dwp::sample_surface_csv(problem->prepared, lo, hi, resolution));
  });
}

int dwp_verify(const dwp_problem* problem, double grad_tol, uint64_t seed, char** json_out,
               int* all_pass) {
  if (!problem || !json_out || !all_pass) {
    g_last_error = "null argument";
    return DWP_ERR_ARGUMENT;
  }
  return guarded([&] {
    dwp::VerifyOptions opts;
    if (grad_tol > 0.0) opts.grad_tol = grad_tol;
    if (seed != 0) opts.seed = seed;
    const dwp::VerifyReport report = dwp::run_verify(problem->prepared, opts);
    *all_pass = report.all_pass() ? 1 : 0;
    emit(json_out, dwp::verify_to_json(problem->prepared, report, opts).dump(2));
  });
}

void dwp_string_free(char* s) { delete[] s; }

const char* dwp_last_error(void) { return g_last_error.c_str(); }

const char* dwp_version(void) { return "1.0.0"; }

}  // extern "C"
