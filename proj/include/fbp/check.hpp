// Discharging proof obligations: backend selection, concurrency, and the
// top-level check/certify entry points.
#pragma once

#include <atomic>
#include <chrono>
#include <thread>

#include "fbp/enum_backend.hpp"
#include "fbp/extract.hpp"
#include "fbp/proof.hpp"
#include "fbp/smt.hpp"

namespace fbp {

struct CheckOptions {
  enum class Backend { Enum, Smt };
  Backend backend = Backend::Smt;
  Bounds bounds;       // finite-model backend
  SmtOptions smt;      // solver backend
  int jobs = 4;        // obligations discharged concurrently
};

struct ObligationResult {
  Obligation obligation;
  Verdict verdict;
  double time_ms = 0;
  bool trivial = false;  // discharged without a backend call
};

struct CheckReport {
  bool accepted = false;  // every obligation valid (possibly only up to bounds)
  bool bounded = false;   // acceptance relies on finite bounds
  std::vector<ObligationResult> results;
  double total_ms = 0;
};

// A claim whose consequent is literally `true` needs no backend.
inline bool trivially_valid(const Formula& claim) {
  if (claim.is(Formula::Kind::True)) return true;
  return claim.is(Formula::Kind::Implies) && claim.kid(1).is(Formula::Kind::True);
}

// Run every obligation through the selected backend, `jobs` at a time.
inline CheckReport discharge(std::vector<Obligation> obs, const CheckOptions& opts) {
  CheckReport report;
  auto t0 = std::chrono::steady_clock::now();
  report.results.resize(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) report.results[i].obligation = std::move(obs[i]);

  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    while (true) {
      size_t i = cursor.fetch_add(1);
      if (i >= report.results.size()) return;
      ObligationResult& r = report.results[i];
      auto s0 = std::chrono::steady_clock::now();
      try {
        if (trivially_valid(r.obligation.claim)) {
          r.trivial = true;
          r.verdict = {VerdictKind::Valid, std::nullopt, "trivial"};
        } else if (opts.backend == CheckOptions::Backend::Enum) {
          r.verdict = enum_check_valid(r.obligation.voc, r.obligation.axioms,
                                       r.obligation.claim, opts.bounds);
        } else {
          r.verdict = smt_check_valid(r.obligation.voc, r.obligation.axioms,
                                      r.obligation.claim, opts.smt, r.obligation.name);
        }
      } catch (const Error& e) {
        r.verdict = {VerdictKind::Unknown, std::nullopt, e.what()};
      }
      r.time_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - s0).count();
    }
  };

  int n = std::max(1, std::min<int>(opts.jobs, static_cast<int>(report.results.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  report.accepted = true;
  for (const ObligationResult& r : report.results) {
    if (!r.verdict.accepted()) report.accepted = false;
    if (r.verdict.kind == VerdictKind::ValidUpToBound) report.bounded = true;
  }
  report.total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// Check a proof tree against a problem.
inline CheckReport check(const SafetyProblem& p, const ProofTree& t, const CheckOptions& opts) {
  return discharge(vcgen(p, t), opts);
}
inline CheckReport check(const SafetyProblem& p, const ProofScript& s, const CheckOptions& opts) {
  return discharge(vcgen(p, s), opts);
}

// Certify a closed one-state formula as an inductive safety invariant for p:
// initiation, consecution per transition, and safety, all under the axioms.
inline CheckReport certify(const SafetyProblem& p, const Formula& inv, const CheckOptions& opts) {
  require_valid(p);
  detail::check_payload(p, inv, "invariant");
  std::vector<Obligation> obs;
  obs.push_back({"certify.initiation", "certify", p.voc, p.axioms, f_implies(p.init, inv)});
  Formula next = prime(p.voc, inv);
  for (const Transition& t : p.transitions)
    obs.push_back({"certify.consecution[" + t.name + "]", "certify", p.voc, p.axioms,
                   f_implies(f_and(inv, t.formula), next)});
  obs.push_back({"certify.safety", "certify", p.voc, p.axioms, f_implies(inv, f_not(p.bad))});
  return discharge(std::move(obs), opts);
}

} // namespace fbp
