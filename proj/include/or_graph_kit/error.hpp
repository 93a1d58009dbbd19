#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orgk {

enum class Errc {
  ambiguous_correspondence,
  bad_calibration,
  invalid_points,
  no_such_instance,
  self_pair,
  no_provenance,
  no_hands,
  bad_logits,
  bad_cost,
  empty_track,
  bad_scores,
  bad_role,
  misaligned_takes,
  bad_script,
  unsupported_ply,
  bad_version,
  bad_schema,
  bad_config,
  io_error,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::ambiguous_correspondence: return "ambiguous-correspondence";
    case Errc::bad_calibration: return "bad-calibration";
    case Errc::invalid_points: return "invalid-points";
    case Errc::no_such_instance: return "no-such-instance";
    case Errc::self_pair: return "self-pair";
    case Errc::no_provenance: return "no-provenance";
    case Errc::no_hands: return "no-hands";
    case Errc::bad_logits: return "bad-logits";
    case Errc::bad_cost: return "bad-cost";
    case Errc::empty_track: return "empty-track";
    case Errc::bad_scores: return "bad-scores";
    case Errc::bad_role: return "bad-role";
    case Errc::misaligned_takes: return "misaligned-takes";
    case Errc::bad_script: return "bad-script";
    case Errc::unsupported_ply: return "unsupported-ply";
    case Errc::bad_version: return "bad-version";
    case Errc::bad_schema: return "bad-schema";
    case Errc::bad_config: return "bad-config";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

/// Input or validation failure. The message is prefixed with the error name
/// so a one-line diagnostic is always self-describing.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace orgk
