#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sfcm/errors.hpp"

namespace sfcm {

/// Integer token units; one token stands for one euro (or one minor unit of
/// the scenario currency). There are no fractional tokens.
using Tokens = std::int64_t;

/// One simulated day.
using Tick = std::uint64_t;

using AccountId = std::string;
using WorkflowId = std::string;
using CreditCode = std::string;

/// Fixed-point ratio in parts per million. All rates are applied to token
/// amounts with floor, so e.g. 0.95 x 100 is exactly 95.
class Ratio {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Ratio() = default;
  static constexpr Ratio from_ppm(std::int64_t ppm) { return Ratio(ppm); }
  static Ratio from_double(double value);

  constexpr std::int64_t ppm() const { return ppm_; }
  double value() const { return static_cast<double>(ppm_) / kScale; }

  /// floor(ratio * amount)
  Tokens apply(Tokens amount) const;

  constexpr auto operator<=>(const Ratio&) const = default;

 private:
  constexpr explicit Ratio(std::int64_t ppm) : ppm_(ppm) {}
  std::int64_t ppm_ = 0;
};

/// floor(a * b / c) with a 128-bit intermediate; c > 0.
std::int64_t mul_div_floor(std::int64_t a, std::int64_t b, std::int64_t c);

enum class DaoId { Investors = 0, Operators = 1 };

enum class Role {
  Investor,
  Customer,
  FinancialInstitution,
  GeneralContractor,
  SubContractor,
  Supplier,
  DesignArchitect,
  TaxAuditor,
  // Escrow wallet of a workflow agent; receives anticipations and pays
  // the operators of its construction site.
  Workflow,
};

/// Whether accounts of `role` may hold tokens of `dao`.
bool member_of(Role role, DaoId dao);

enum class WorkflowState { Open = 0, Anticipation, Sal1, Sal2, Eow, Archived };

inline constexpr std::size_t kWorkflowStateCount = 6;
inline constexpr std::array<WorkflowState, kWorkflowStateCount> kAllWorkflowStates{
    WorkflowState::Open, WorkflowState::Anticipation, WorkflowState::Sal1,
    WorkflowState::Sal2, WorkflowState::Eow,          WorkflowState::Archived};

constexpr std::size_t index_of(WorkflowState s) { return static_cast<std::size_t>(s); }

/// Successor in the paperwork automaton; nullopt for Archived.
std::optional<WorkflowState> next_state(WorkflowState s);
/// Predecessor; nullopt for Open.
std::optional<WorkflowState> prev_state(WorkflowState s);

enum class AsseverationKind { Technical, Financial };
enum class LinkStatus { Active, Released };
enum class CreditState { Accruing, Matured, Sold };
/// Raising: deposits accepted. Investing: quotas fixed, first freeze done.
enum class FundStatus { Raising, Investing, Closed };

std::string_view to_string(DaoId v);
std::string_view to_string(Role v);
std::string_view to_string(WorkflowState v);
std::string_view to_string(AsseverationKind v);
std::string_view to_string(LinkStatus v);
std::string_view to_string(CreditState v);
std::string_view to_string(FundStatus v);

// Parsers throw ValidationError on unknown names.
DaoId dao_from_string(std::string_view s);
Role role_from_string(std::string_view s);
WorkflowState workflow_state_from_string(std::string_view s);
AsseverationKind asseveration_kind_from_string(std::string_view s);
LinkStatus link_status_from_string(std::string_view s);
CreditState credit_state_from_string(std::string_view s);
FundStatus fund_status_from_string(std::string_view s);

}  // namespace sfcm
