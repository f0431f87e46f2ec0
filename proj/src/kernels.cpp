#include "ait/kernels.hpp"

#include <algorithm>
#include <exception>

#include <omp.h>

#include "ait/errors.hpp"

namespace ait {
namespace {

int default_threads = 0;

void descend(std::unique_ptr<Execution> exec, BitString& path, std::size_t max_len, Steps budget,
             Exploration& out) {
  ++out.nodes;
  switch (exec->resume(budget)) {
    case Event::halted:
      out.records.push_back({path, exec->output(), exec->steps()});
      return;
    case Event::out_of_budget:
      out.pending.push_back({path, Pending::out_of_budget});
      return;
    case Event::needs_input:
      break;
  }
  if (path.size() >= max_len) {
    out.pending.push_back({path, Pending::needs_input});
    return;
  }
  auto zero = exec->clone();
  zero->feed(false);
  path.push_back(false);
  descend(std::move(zero), path, max_len, budget, out);
  path.pop_back();
  exec->feed(true);
  path.push_back(true);
  descend(std::move(exec), path, max_len, budget, out);
  path.pop_back();
}

void explore_root(const Computer& machine, const BitString& root, std::size_t max_len, Steps budget,
                  Exploration& out) {
  auto exec = machine.start();
  // Replay the root. Steps are monotone, so a budget that covered the root
  // before still covers it; an exhausted budget just marks it pending again.
  while (exec->consumed() < root.size()) {
    const Event e = exec->resume(budget);
    if (e == Event::halted) {
      throw DomainViolation("exploration root \"" + root.to_string() + "\" has a halting proper prefix");
    }
    if (e == Event::out_of_budget) {
      out.pending.push_back({root, Pending::out_of_budget});
      return;
    }
    exec->feed(root[exec->consumed()]);
  }
  BitString path = root;
  descend(std::move(exec), path, max_len, budget, out);
}

void finish(Exploration& e) {
  std::sort(e.records.begin(), e.records.end(), by_program);
  std::sort(e.pending.begin(), e.pending.end(),
            [](const PendingPrefix& a, const PendingPrefix& b) { return a.prefix < b.prefix; });
}

}  // namespace

void set_worker_count(int n) {
  if (default_threads == 0) default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : default_threads);
}

int worker_count() { return omp_get_max_threads(); }

Exploration explore(const Computer& machine, const std::vector<BitString>& roots, std::size_t max_len,
                    Steps budget, Exec exec) {
  Exploration total;
  if (exec == Exec::serial) {
    for (const auto& r : roots) explore_root(machine, r, max_len, budget, total);
    finish(total);
    return total;
  }

  const auto n = static_cast<std::ptrdiff_t>(roots.size());
  std::vector<Exploration> parts(roots.size());
  std::vector<std::exception_ptr> errors(roots.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      explore_root(machine, roots[i], max_len, budget, parts[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::size_t nrec = 0;
  std::size_t npend = 0;
  for (const auto& p : parts) {
    nrec += p.records.size();
    npend += p.pending.size();
  }
  total.records.reserve(nrec);
  total.pending.reserve(npend);
  for (auto& p : parts) {
    std::move(p.records.begin(), p.records.end(), std::back_inserter(total.records));
    std::move(p.pending.begin(), p.pending.end(), std::back_inserter(total.pending));
    total.nodes += p.nodes;
  }
  finish(total);
  return total;
}

std::vector<Interval> evaluate_terms(std::size_t n, const std::function<Interval(std::size_t)>& f,
                                     Exec exec) {
  std::vector<Interval> out(n);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto m = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    try {
      out[i] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace ait
