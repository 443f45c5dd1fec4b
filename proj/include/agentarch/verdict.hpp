#pragma once

#include <map>
#include <string>
#include <vector>

namespace agentarch {

// Outcome of any check. `not_evaluable` is an honest third value: the
// property is declared but no decision procedure applies (e.g. prose-only
// constraints), and it never blocks an otherwise admissible agent.
struct Verdict {
  enum class Status { pass, fail, not_evaluable };

  Status status = Status::pass;
  std::map<std::string, double> residuals;
  std::vector<std::string> evidence;

  bool ok() const { return status == Status::pass; }

  static Verdict passed(std::string note = "") {
    Verdict v;
    if (!note.empty()) v.evidence.push_back(std::move(note));
    return v;
  }
  static Verdict failed(std::string note) {
    Verdict v;
    v.status = Status::fail;
    v.evidence.push_back(std::move(note));
    return v;
  }
  static Verdict undecided(std::string note) {
    Verdict v;
    v.status = Status::not_evaluable;
    v.evidence.push_back(std::move(note));
    return v;
  }
  Verdict& note(std::string line) {
    evidence.push_back(std::move(line));
    return *this;
  }
  Verdict& residual(const std::string& key, double value) {
    residuals[key] = value;
    return *this;
  }
};

inline const char* to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::pass: return "pass";
    case Verdict::Status::fail: return "fail";
    default: return "not_evaluable";
  }
}

// Any fail blocks; not_evaluable never does (the combined status of pass and
// not_evaluable is pass — the undecided part is still visible as evidence).
inline Verdict::Status combine_blocking(Verdict::Status a, Verdict::Status b) {
  if (a == Verdict::Status::fail || b == Verdict::Status::fail) return Verdict::Status::fail;
  return Verdict::Status::pass;
}

inline Verdict combine_blocking(Verdict a, const Verdict& b) {
  a.status = combine_blocking(a.status, b.status);
  for (const auto& [key, value] : b.residuals) a.residuals[key] = value;
  a.evidence.insert(a.evidence.end(), b.evidence.begin(), b.evidence.end());
  return a;
}

}  // namespace agentarch
