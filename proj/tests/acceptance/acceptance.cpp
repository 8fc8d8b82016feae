// Runs every verification suite and prints one PASS/FAIL line per
// acceptance criterion, followed by the individual checks.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "muskat/cli/verify.hpp"
#include "muskat/io.hpp"

namespace {

const std::map<int, std::string> kTitles{
    {1, "linear dispersion, one phase"},
    {2, "linear dispersion, two phase"},
    {3, "Dirichlet-Neumann oracle agreement"},
    {4, "Gateaux derivative of E"},
    {5, "paralinearization order"},
    {6, "elastic form identity"},
    {7, "scaling invariance"},
    {8, "two-phase pressure"},
    {9, "mean conservation and smoothing"},
    {10, "Lipschitz stability"},
    {11, "Picard vs time stepping"},
    {12, "ETDRK2 temporal order"},
};

}  // namespace

int main() {
  std::map<int, std::vector<muskat::cli::CheckRow>> by_criterion;
  for (const auto& suite : muskat::cli::suite_names())
    for (auto& row : muskat::cli::run_suite(suite)) by_criterion[row.criterion].push_back(std::move(row));

  bool all = true;
  for (const auto& [id, title] : kTitles) {
    const auto& rows = by_criterion[id];
    bool pass = !rows.empty();
    for (const auto& r : rows) pass = pass && r.pass;
    all = all && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << '\n';
    for (const auto& r : rows) {
      std::cout << "    " << (r.pass ? "ok   " : "FAIL ") << r.check << ": measured "
                << muskat::format_number(r.measured) << ", expected " << muskat::format_number(r.expected)
                << ", tolerance " << muskat::format_number(r.tolerance);
      if (!r.note.empty()) std::cout << " (" << r.note << ')';
      std::cout << '\n';
    }
  }
  return all ? 0 : 1;
}
