#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nahmforge/expr.hpp"

namespace nahmforge {

enum class Status { Theorem, Conjecture, KnownClassical };

const char* to_string(Status s);
Status status_from_string(const std::string& s);

struct IdentityRecord {
    std::string id;           // unique stable key, e.g. "dZ1", "S.25", "AG(3,2)"
    std::string paper_label;  // display label the identity is cited by
    Status status = Status::Theorem;
    Rational default_order = 50;
    ExprPtr lhs, rhs;
    std::string family;         // coarse grouping used by list filters
    std::string family_params;  // human-readable parameter ranges, e.g. "i >= 0"
    bool metadata_only = false; // tabulated constants, no equality content
    std::string note;
};

enum class Outcome { Match, Mismatch, AccuracyInsufficient };

const char* to_string(Outcome o);

struct VerificationReport {
    std::string id;
    Rational order_checked = 0;
    Outcome outcome = Outcome::Match;
    std::optional<QSeries::Mismatch> mismatch;  // present iff outcome == Mismatch
    double elapsed_s = 0;
};

/* The built-in identity catalog plus optional user overlays.  Immutable once
 * loaded; verification calls are independent and safe to run concurrently.
 *
 * Parameterized families keep a single generator record whose id ends in
 * "(i)" ("finite-sum-7(i)", "shift-2(i)"); verifying the generator id checks
 * i = 0..15, and a concrete instance id like "finite-sum-7(3)" checks that
 * single instance. */
class Catalog {
public:
    static Catalog builtin();

    // Adds identities from an overlay JSON document
    // { "identities": [ { "id", "paper_label", "status", "default_order",
    //   "lhs": <expr>, "rhs": <expr> } ] }.  New entries only: an id that
    // collides with an existing record is an error, never a silent override.
    void add_overlay_json(const std::string& text);

    const IdentityRecord* find(const std::string& id) const;

    // Records in id order, optionally filtered; empty family matches all.
    std::vector<const IdentityRecord*> list(const std::string& family = "",
                                            std::optional<Status> status = {}) const;

    // Compares both sides below `order` (record's default_order when absent).
    // Unknown id throws std::invalid_argument.
    VerificationReport verify(const std::string& id,
                              std::optional<Rational> order = {}) const;

    const std::vector<IdentityRecord>& records() const { return records_; }

private:
    std::vector<IdentityRecord> records_;  // sorted by id
};

}  // namespace nahmforge
