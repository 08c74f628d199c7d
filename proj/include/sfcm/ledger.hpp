#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfcm/journal.hpp"

namespace sfcm {

/// Result of selling a matured tax credit on the secondary market.
struct SaleOutcome {
  Tokens released = 0;   // investor tokens unfrozen by the sale itself
  Tokens profit = 0;     // minted into the Investors DAO, held by the FI
  Tokens shortfall = 0;  // sale below the original frozen amount
};

/// Splits `profit` over `shares` proportionally with the largest-remainder
/// method: floors of the exact rational shares, then one extra token to the
/// largest fractional remainders, ties broken by ascending account id.
/// The result sums to `profit` exactly.
std::map<AccountId, Tokens> split_proportional(const std::map<AccountId, Tokens>& shares, Tokens profit);

/// Dual-DAO token ledger. Every lifecycle operation (mint, freeze, burn,
/// release, credit sale, payout) must be issued by the Financial Institution.
class Ledger {
 public:
  explicit Ledger(Journal& journal) : journal_(journal) {}

  const LedgerState& state() const { return journal_.state().ledger; }
  const Journal& journal() const { return journal_; }

  void open_account(const AccountId& id, Role role, std::optional<Tokens> soa_cap = std::nullopt);

  /// One token per unit of fiat deposited. Only while the fund is raising.
  TokenPool mint_investor(const AccountId& issuer, const AccountId& account, Tokens amount);

  /// Freezes floor(discount_rate x requested) free investor tokens and mints
  /// the same amount of operator tokens to the GC under a fresh credit code.
  /// The tax credit accrues on the requested work value.
  FreezeLink freeze_and_mint(const AccountId& issuer, const AccountId& gc, Tokens requested_work_value,
                             Ratio discount_rate, std::optional<WorkflowId> workflow = std::nullopt);

  /// Moves operator tokens. A zero amount is a no-op. Payments out of a
  /// workflow escrow are booked as that workflow's payments_sent for its
  /// current state and must stay within the anticipation received for it.
  void transfer_operator(const AccountId& from, const AccountId& to, Tokens amount,
                         const std::string& invoice_ref);

  /// Burns operator tokens from `holder` and releases the same amount of
  /// frozen investor tokens under the credit code.
  FreezeLink burn_and_release(const AccountId& issuer, const AccountId& holder, const CreditCode& code,
                              Tokens amount);

  TaxCredit mature_credit(const AccountId& issuer, const CreditCode& code);

  /// Requires a matured credit whose link is fully redeemed. Mints
  /// sale_price - original frozen amount as profit; a sale below that
  /// amount is booked as a shortfall with zero profit.
  SaleOutcome sell_credit(const AccountId& issuer, const CreditCode& code, Tokens sale_price);

  /// Pays every investor quota + proportional share of (T'' - T') and burns
  /// the whole Investors-DAO supply.
  std::map<AccountId, Tokens> close_fund_and_payout(const AccountId& issuer);

  /// Free investor supply the FI commits to cover during `period`.
  void publish_forecast(const AccountId& issuer, std::int64_t period, Tokens amount);

  /// Throws unless a transfer of `amount` from -> to is allowed right now.
  void check_operator_transfer(const AccountId& from, const AccountId& to, Tokens amount) const;

  /// Coverage available for new operator demand in `period` (C2 bound).
  Tokens demand_allowance(std::int64_t period) const;

 private:
  void require_issuer(const AccountId& issuer) const;

  Journal& journal_;
};

/// Ledger-wide invariants (conservation, coverage, non-negativity, freeze
/// bound). Returns one message per breach; empty when the ledger is sound.
std::vector<std::string> check_ledger_invariants(const LedgerState& ledger);

}  // namespace sfcm
