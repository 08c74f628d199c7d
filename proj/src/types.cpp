#include "sfcm/types.hpp"

#include <cmath>
#include <limits>

namespace sfcm {

std::string to_string(ConstraintId id) {
  return "C" + std::to_string(static_cast<int>(id));
}

Ratio Ratio::from_double(double value) {
  if (!std::isfinite(value)) throw ValidationError("ratio must be finite");
  const double scaled = value * static_cast<double>(kScale);
  if (std::fabs(scaled) > static_cast<double>(std::numeric_limits<std::int64_t>::max() / 2)) {
    throw ValidationError("ratio out of range");
  }
  return Ratio(static_cast<std::int64_t>(std::llround(scaled)));
}

std::int64_t mul_div_floor(std::int64_t a, std::int64_t b, std::int64_t c) {
  if (c <= 0) throw ValidationError("mul_div_floor: non-positive divisor");
  const __int128 num = static_cast<__int128>(a) * b;
  __int128 q = num / c;
  if ((num % c != 0) && (num < 0)) --q;
  if (q > std::numeric_limits<std::int64_t>::max() || q < std::numeric_limits<std::int64_t>::min()) {
    throw ValidationError("mul_div_floor: overflow");
  }
  return static_cast<std::int64_t>(q);
}

Tokens Ratio::apply(Tokens amount) const { return mul_div_floor(ppm_, amount, kScale); }

bool member_of(Role role, DaoId dao) {
  switch (role) {
    case Role::Investor:
      return dao == DaoId::Investors;
    case Role::FinancialInstitution:
      return true;
    case Role::Customer:
      return false;
    case Role::GeneralContractor:
    case Role::SubContractor:
    case Role::Supplier:
    case Role::DesignArchitect:
    case Role::TaxAuditor:
    case Role::Workflow:
      return dao == DaoId::Operators;
  }
  return false;
}

std::optional<WorkflowState> next_state(WorkflowState s) {
  if (s == WorkflowState::Archived) return std::nullopt;
  return static_cast<WorkflowState>(index_of(s) + 1);
}

std::optional<WorkflowState> prev_state(WorkflowState s) {
  if (s == WorkflowState::Open) return std::nullopt;
  return static_cast<WorkflowState>(index_of(s) - 1);
}

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& values, const char* what) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  throw ValidationError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(DaoId v) {
  return v == DaoId::Investors ? "Investors" : "Operators";
}

std::string_view to_string(Role v) {
  switch (v) {
    case Role::Investor: return "Investor";
    case Role::Customer: return "Customer";
    case Role::FinancialInstitution: return "FinancialInstitution";
    case Role::GeneralContractor: return "GeneralContractor";
    case Role::SubContractor: return "SubContractor";
    case Role::Supplier: return "Supplier";
    case Role::DesignArchitect: return "DesignArchitect";
    case Role::TaxAuditor: return "TaxAuditor";
    case Role::Workflow: return "Workflow";
  }
  return "?";
}

std::string_view to_string(WorkflowState v) {
  switch (v) {
    case WorkflowState::Open: return "Open";
    case WorkflowState::Anticipation: return "Anticipation";
    case WorkflowState::Sal1: return "Sal1";
    case WorkflowState::Sal2: return "Sal2";
    case WorkflowState::Eow: return "Eow";
    case WorkflowState::Archived: return "Archived";
  }
  return "?";
}

std::string_view to_string(AsseverationKind v) {
  return v == AsseverationKind::Technical ? "Technical" : "Financial";
}

std::string_view to_string(LinkStatus v) { return v == LinkStatus::Active ? "Active" : "Released"; }

std::string_view to_string(CreditState v) {
  switch (v) {
    case CreditState::Accruing: return "Accruing";
    case CreditState::Matured: return "Matured";
    case CreditState::Sold: return "Sold";
  }
  return "?";
}

std::string_view to_string(FundStatus v) {
  switch (v) {
    case FundStatus::Raising: return "Raising";
    case FundStatus::Investing: return "Investing";
    case FundStatus::Closed: return "Closed";
  }
  return "?";
}

DaoId dao_from_string(std::string_view s) {
  return parse_enum(s, std::array{DaoId::Investors, DaoId::Operators}, "dao");
}

Role role_from_string(std::string_view s) {
  return parse_enum(s,
                    std::array{Role::Investor, Role::Customer, Role::FinancialInstitution,
                               Role::GeneralContractor, Role::SubContractor, Role::Supplier,
                               Role::DesignArchitect, Role::TaxAuditor, Role::Workflow},
                    "role");
}

WorkflowState workflow_state_from_string(std::string_view s) {
  return parse_enum(s, kAllWorkflowStates, "workflow state");
}

AsseverationKind asseveration_kind_from_string(std::string_view s) {
  return parse_enum(s, std::array{AsseverationKind::Technical, AsseverationKind::Financial},
                    "asseveration kind");
}

LinkStatus link_status_from_string(std::string_view s) {
  return parse_enum(s, std::array{LinkStatus::Active, LinkStatus::Released}, "link status");
}

CreditState credit_state_from_string(std::string_view s) {
  return parse_enum(s, std::array{CreditState::Accruing, CreditState::Matured, CreditState::Sold},
                    "credit state");
}

FundStatus fund_status_from_string(std::string_view s) {
  return parse_enum(s, std::array{FundStatus::Raising, FundStatus::Investing, FundStatus::Closed},
                    "fund status");
}

}  // namespace sfcm
