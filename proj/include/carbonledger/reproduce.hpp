// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "carbonledger/service.hpp"

// The headline-number reproduction table. Every tolerance is fixed here; the
// oracles used by the property rows are coded separately from the library
// paths they check.
namespace carbonledger::reproduce {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Issues one API request and returns the status and body.
using Transport = std::function<service::Response(std::string_view method, std::string_view path, const std::string& body)>;

/// A transport that calls a Router over the seeded catalog directly.
Transport in_process_transport();

/// Runs every row. `api` serves the seeded catalog and backs the service-parity row.
std::vector<CriterionResult> run_all(const Transport& api);

/// One "[PASS] ..." / "[FAIL] ..." line per row plus a summary. Returns true when all pass.
bool print(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace carbonledger::reproduce
