#pragma once

#include "dioph/cf1d.hpp"
#include "dioph/exponents.hpp"
#include "dioph/linform.hpp"
#include "dioph/simul.hpp"
#include "dioph/synth.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace report {

using nlohmann::ordered_json;
using json = ordered_json;

constexpr const char* kSchema = "dioph.report/1";
constexpr const char* kLedgerSchema = "dioph.ledger/1";

json to_json(const dioph::Int& x);
json to_json(const dioph::Rat& x);
json to_json(const dioph::Interval& x);
json to_json(const dioph::IntVec& v);
json to_json(const dioph::CheckReport& r);
json to_json(const dioph::CFExpansion& e);
json to_json(const dioph::SimulSequence& seq);
json to_json(const dioph::LinFormSequence& seq);
json to_json(const dioph::ExponentReport& r);
json to_json(const dioph::Prop3Report& r);
json to_json(const dioph::GdResult& g);
json to_json(const dioph::StepRecord& s);
json to_json(const dioph::VerifyReport& r);
json ledger_json(const dioph::ConstructionState& st);
dioph::ConstructionState ledger_from_json(const json& j);

std::string approx(const dioph::Rat& x, int digits = 6);
std::string approx(const dioph::Interval& x, int digits = 6);

// Aligned two-or-more column text.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
    void print(std::ostream& os) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void print_checks(std::ostream& os, const std::vector<const dioph::CheckReport*>& checks);

}  // namespace report
