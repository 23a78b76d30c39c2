#pragma once

// Built-in end-to-end runs on the embedded fixtures. Each example returns its
// report, a CSV table and whether the documented outcome was reproduced.

#include <optional>
#include <string>
#include <vector>

#include "l2approx/asymptotics.hpp"
#include "l2approx/exact_linalg.hpp"
#include "l2approx/report.hpp"

namespace l2approx {

struct ExampleOptions {
  std::optional<LimitPolicy> policy;  // example default when unset
  std::optional<LambdaGrid> grid;
};

struct ExampleOutcome {
  Json result;
  std::string csv;
  bool as_expected = true;
};

struct ExampleInfo {
  std::string name;
  std::string description;
};

const std::vector<ExampleInfo>& example_list();
ExampleOutcome run_example(const std::string& name, const ExampleOptions& opt = {});

// Presentation stored in an embedded fixture.
Presentation fixture_presentation(const std::string& name);
// Circle-group spectral measure of 2 - t - t^-1: (1/pi) arccos(1 - lambda^2/2).
double arcsine_density(double lambda);

// Exact dim H_i of the complex twisted by a representation over an exact domain.
template <class T>
std::size_t twisted_betti(const GroupComplex& c, const FiniteRep<T>& rep, std::size_t i) {
  std::vector<Matrix<T>> b;
  for (const auto& d : c.boundaries) b.push_back(specialize(d, rep));
  return betti(b, i);
}

}  // namespace l2approx
