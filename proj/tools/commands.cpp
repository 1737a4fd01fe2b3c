#include "commands.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "formats.hpp"
#include "qumark/attacks.hpp"
#include "qumark/carrier.hpp"
#include "qumark/error.hpp"
#include "qumark/keys.hpp"
#include "qumark/stats.hpp"
#include "qumark/watermark.hpp"

namespace qumark::cli {
namespace {

// Usage problems detected after parsing (bad combinations, inconsistent
// files). Reported on one line with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string read_input(const std::string& path, Io& io) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(io.in), {});
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(file), {});
}

void write_output(const std::string& path, std::string_view data, Io& io) {
  if (path == "-") {
    io.out.write(data.data(), static_cast<std::streamsize>(data.size()));
    io.out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!file) throw UsageError("failed writing '" + path + "'");
}

std::vector<std::uint8_t> as_bytes(const std::string& s) {
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

std::string as_string(const std::vector<std::uint8_t>& bytes) {
  return std::string(bytes.begin(), bytes.end());
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// --seed if given, else QUMARK_SEED, else nullopt.
std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  const char* env = std::getenv("QUMARK_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  std::uint64_t seed = 0;
  std::string_view text(env);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("QUMARK_SEED must be an unsigned integer, got '" +
                     std::string(text) + "'");
  }
  return seed;
}

std::uint64_t seed_or_entropy(const std::optional<std::uint64_t>& flag) {
  if (auto seed = resolve_seed(flag)) return *seed;
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

struct Payload {
  carrier::CarrierPayload payload;
  std::optional<carrier::ImageMeta> meta;
};

Payload load_payload(const std::string& path, const std::string& format, Io& io) {
  std::vector<std::uint8_t> bytes = as_bytes(read_input(path, io));
  if (format == "pgm") {
    auto ingested = carrier::ingest_pgm(bytes);
    return {std::move(ingested.payload), std::move(ingested.meta)};
  }
  return {carrier::ingest_raw(bytes), std::nullopt};
}

formats::SecretFile load_secret(const std::string& path, Io& io) {
  return formats::decode_secret(read_input(path, io));
}

ObservedMessage load_observation(const std::string& path, Io& io) {
  return formats::decode_observation(read_input(path, io)).to_observation();
}

void print_report(std::ostream& os, const VerificationReport& r,
                  const std::string& prefix = "") {
  os << prefix << "error_count: " << r.error_count << "\n"
     << prefix << "sample_size: " << r.sample_size << "\n"
     << prefix << "observed_frequency: " << shortest(r.observed_frequency) << "\n"
     << prefix << "expected_pe: " << shortest(r.expected_pe) << "\n"
     << prefix << "rule: " << r.rule.to_string() << "\n"
     << prefix << "bound_low: " << shortest(r.decision_detail.bound_low) << "\n"
     << prefix << "bound_high: " << shortest(r.decision_detail.bound_high) << "\n";
  if (r.decision_detail.p_value) {
    os << prefix << "p_value: " << shortest(*r.decision_detail.p_value) << "\n";
  }
  os << prefix << "decision: " << stats::to_string(r.decision) << "\n";
}

void check_secret_fits(const formats::SecretFile& secret, std::size_t length) {
  if (secret.message_length != length) {
    throw UsageError("secret was made for a message of " +
                     std::to_string(secret.message_length) +
                     " bits but the input has " + std::to_string(length));
  }
}

// ---------------------------------------------------------------- keygen

struct KeygenOptions {
  std::optional<std::size_t> message_len;
  std::size_t count = 0;
  std::string mask_from;
  std::string format = "auto";
  double mark_basis = 45.0;
  double writing_basis = 0.0;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
};

int cmd_keygen(const KeygenOptions& o, Io& io) {
  keys::DerivationParams params;
  if (!o.mask_from.empty()) {
    std::string data = read_input(o.mask_from, io);
    std::string format = o.format;
    if (format == "auto") format = data.rfind("P5", 0) == 0 ? "pgm" : "raw";
    std::vector<std::uint8_t> bytes = as_bytes(data);
    carrier::CarrierPayload payload = format == "pgm"
                                          ? carrier::ingest_pgm(bytes).payload
                                          : carrier::ingest_raw(bytes);
    if (o.message_len && *o.message_len != payload.bits.size()) {
      throw UsageError("--message-len " + std::to_string(*o.message_len) +
                       " disagrees with the mask payload (" +
                       std::to_string(payload.bits.size()) + " bits)");
    }
    params.message_length = payload.bits.size();
    params.eligibility_mask = std::move(payload.eligibility_mask);
  } else if (o.message_len) {
    params.message_length = *o.message_len;
  } else {
    throw UsageError("keygen needs --message-len or --mask-from");
  }
  if (params.message_length == 0) throw UsageError("--message-len must be positive");
  params.mark_count = o.count;

  Basis writing(o.writing_basis);
  Basis mark(o.mark_basis);
  if (!mark.dissimilar_to(writing)) {
    throw Error(ErrorCode::BasisNotDissimilar,
                "mark basis must differ from the writing basis");
  }
  auto seed = resolve_seed(o.seed);
  keys::SecretKey key = seed ? keys::SecretKey::from_seed(*seed)
                             : keys::SecretKey::generate();
  WatermarkSecret secret = keys::generate_secret(key, params, mark);
  auto file = formats::SecretFile::from_secret(secret, params.message_length, writing);
  write_output(o.out, formats::encode(file), io);
  return 0;
}

// ----------------------------------------------------------------- embed

struct EmbedCliOptions {
  std::string in;
  std::string format = "raw";
  std::string secret;
  std::string out;
  std::string reference_out;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

int cmd_embed(const EmbedCliOptions& o, Io& io) {
  Payload payload = load_payload(o.in, o.format, io);
  formats::SecretFile secret_file = load_secret(o.secret, io);
  check_secret_fits(secret_file, payload.payload.bits.size());
  WatermarkSecret secret = secret_file.to_secret();
  Basis writing(secret_file.writing_basis_theta);

  QuantumMessage message = build_message(payload.payload.bits, writing);
  for (const auto& w : embed_warnings(message, secret)) {
    io.err << "qumark: warning: " << w << "\n";
  }
  RandomSource rng(seed_or_entropy(o.seed));
  EmbedOptions options;
  options.strict = o.strict;
  QuantumMessage marked = embed(message, secret, rng, options);

  write_output(o.out, formats::encode(formats::QuantumMessageFile::from_message(marked)), io);
  // Alice keeps M observed in j, which for eigenstates is the plaintext.
  std::string reference_path = o.reference_out.empty() ? o.out + ".ref" : o.reference_out;
  ObservedMessage reference{payload.payload.bits, writing};
  write_output(reference_path,
               formats::encode(formats::ObservationFile::from_observation(reference)), io);
  return 0;
}

// --------------------------------------------------------------- observe

struct ObserveOptions {
  std::string in;
  std::string out = "-";
  std::optional<std::uint64_t> seed;
  std::optional<double> basis;
};

int cmd_observe(const ObserveOptions& o, Io& io) {
  QuantumMessage message = formats::decode_message(read_input(o.in, io)).to_message();
  Basis basis = o.basis ? Basis(*o.basis) : message.writing_basis();
  RandomSource rng(seed_or_entropy(o.seed));
  ObservedMessage observed = observe(message, basis, rng);
  write_output(o.out, formats::encode(formats::ObservationFile::from_observation(observed)), io);
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  std::string suspect;
  std::string reference;
  std::string secret;
  std::string rule = "wilson:0.99";
};

int cmd_verify(const VerifyOptions& o, Io& io) {
  stats::DecisionRule rule = stats::DecisionRule::parse(o.rule);
  ObservedMessage suspect = load_observation(o.suspect, io);
  ObservedMessage reference = load_observation(o.reference, io);
  formats::SecretFile secret_file = load_secret(o.secret, io);
  check_secret_fits(secret_file, reference.size());
  VerificationReport report = verify(suspect, reference, secret_file.to_secret(), rule);
  print_report(io.out, report);
  return report.decision == stats::Decision::Accept ? kExitAccept : kExitReject;
}

// ---------------------------------------------------------------- attack

struct AttackOptions {
  std::vector<std::string> copies;
  std::string in;
  std::string out = "-";
  double rate = 0.0;
  std::optional<std::uint64_t> seed;
  std::size_t offset = 1;
  int pad = 0;
  std::string reference;
  std::string secret;
  std::string rule = "wilson:0.99";
};

int report_attack(const AttackOptions& o, const ObservedMessage& before,
                  const ObservedMessage& after, Io& io) {
  write_output(o.out, formats::encode(formats::ObservationFile::from_observation(after)), io);
  if (o.reference.empty() || o.secret.empty()) return 0;
  stats::DecisionRule rule = stats::DecisionRule::parse(o.rule);
  ObservedMessage reference = load_observation(o.reference, io);
  formats::SecretFile secret_file = load_secret(o.secret, io);
  check_secret_fits(secret_file, reference.size());
  WatermarkSecret secret = secret_file.to_secret();
  auto outcome = attacks::run_attack_report(
      reference, before, [&](const ObservedMessage&) { return after; }, secret, rule);
  // The attacked file may share stdout; the report goes to stderr then.
  std::ostream& os = o.out == "-" ? io.err : io.out;
  print_report(os, outcome.verification_before, "before.");
  print_report(os, outcome.verification_after, "after.");
  return 0;
}

int cmd_attack_averaging(const AttackOptions& o, Io& io) {
  std::vector<ObservedMessage> copies;
  for (const auto& path : o.copies) copies.push_back(load_observation(path, io));
  attacks::AveragingResult result = attacks::averaging_attack(copies);
  ObservedMessage recovered{result.recovered_bits, copies.front().observation_basis};
  std::ostream& os = o.out == "-" ? io.err : io.out;
  os << "copies: " << copies.size() << "\n"
     << "suspected_positions: " << result.suspected_indices.size() << "\n";
  if (!o.secret.empty()) {
    formats::SecretFile secret_file = load_secret(o.secret, io);
    std::size_t hit = 0;
    std::size_t s = 0;
    for (std::size_t idx : secret_file.indices) {
      while (s < result.suspected_indices.size() && result.suspected_indices[s] < idx) ++s;
      hit += (s < result.suspected_indices.size() && result.suspected_indices[s] == idx);
    }
    os << "identified_indices: " << hit << "/" << secret_file.indices.size() << "\n";
  }
  return report_attack(o, copies.front(), recovered, io);
}

int cmd_attack_noise(const AttackOptions& o, Io& io) {
  ObservedMessage input = load_observation(o.in, io);
  RandomSource rng(seed_or_entropy(o.seed));
  return report_attack(o, input, attacks::noise_attack(input, o.rate, rng), io);
}

int cmd_attack_shift(const AttackOptions& o, Io& io) {
  ObservedMessage input = load_observation(o.in, io);
  return report_attack(
      o, input,
      attacks::shift_attack(input, o.offset, static_cast<std::uint8_t>(o.pad)), io);
}

// --------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::vector<double> pe;
  std::vector<double> null_rate{0.0};
  std::vector<double> confidence{0.99};
  std::vector<double> power{0.99};
};

int cmd_analyze(const AnalyzeOptions& o, Io& io) {
  io.out << "pe\tnull\tconfidence\tpower\trecommended_size\tliteral_min_n\n";
  for (double pe : o.pe) {
    auto literal = stats::min_sample_size_literal(pe);
    for (double q : o.null_rate) {
      for (double c : o.confidence) {
        for (double w : o.power) {
          std::uint64_t n = stats::recommended_sample_size(pe, q, c, w);
          io.out << shortest(pe) << "\t" << shortest(q) << "\t" << shortest(c)
                 << "\t" << shortest(w) << "\t" << n << "\t" << literal.n << "\n";
        }
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------- render

struct RenderOptions {
  std::string in;
  std::string format = "raw";
  std::string like;
  std::string out = "-";
};

int cmd_render(const RenderOptions& o, Io& io) {
  ObservedMessage observed = load_observation(o.in, io);
  carrier::CarrierPayload payload;
  payload.bits = observed.bits;
  payload.eligibility_mask.assign(observed.bits.size(), 1);
  std::optional<carrier::ImageMeta> meta;
  if (o.format == "pgm") {
    if (o.like.empty()) throw UsageError("render --format pgm needs --like IMAGE");
    meta = carrier::ingest_pgm(as_bytes(read_input(o.like, io))).meta;
    payload.format = carrier::FormatTag::PgmLsb;
  } else if (observed.bits.size() % 8 != 0) {
    throw UsageError("raw rendering needs a whole number of bytes");
  }
  write_output(o.out, as_string(carrier::emit(payload, meta)), io);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  Io io{in, out, err};
  CLI::App app{"qumark: quantum fuzzy watermarking toolkit", "qumark"};
  app.require_subcommand(1);
  std::function<int()> action;

  KeygenOptions keygen;
  auto* kg = app.add_subcommand("keygen", "Derive a watermark secret from a key");
  kg->add_option("--message-len", keygen.message_len, "Message length in bits");
  kg->add_option("--count", keygen.count, "Number of watermark positions |I|")->required();
  kg->add_option("--mask-from", keygen.mask_from, "Payload whose eligibility mask constrains I");
  kg->add_option("--format", keygen.format, "Mask payload format")
      ->check(CLI::IsMember({"auto", "raw", "pgm"}));
  kg->add_option("--mark-basis", keygen.mark_basis, "Mark basis angle k in degrees");
  kg->add_option("--writing-basis", keygen.writing_basis, "Writing basis angle j in degrees");
  kg->add_option("--seed", keygen.seed, "Derive the key from this seed");
  kg->add_option("--out,-o", keygen.out, "Secret file ('-' for stdout)");
  kg->callback([&] { action = [&] { return cmd_keygen(keygen, io); }; });

  EmbedCliOptions embed_opts;
  auto* em = app.add_subcommand("embed", "Build a quantum message and watermark it");
  em->add_option("--in", embed_opts.in, "Payload file ('-' for stdin)")->required();
  em->add_option("--format", embed_opts.format, "Payload format")
      ->check(CLI::IsMember({"raw", "pgm"}));
  em->add_option("--secret", embed_opts.secret, "Secret file")->required();
  em->add_option("--out,-o", embed_opts.out, "Quantum message file")->required();
  em->add_option("--reference-out", embed_opts.reference_out,
                 "Reference observation file (default: OUT.ref)");
  em->add_option("--seed", embed_opts.seed, "Measurement seed");
  em->add_flag("--strict", embed_opts.strict, "Reject secrets below the recommended size");
  em->callback([&] { action = [&] { return cmd_embed(embed_opts, io); }; });

  ObserveOptions observe_opts;
  auto* ob = app.add_subcommand("observe", "Measure a quantum message");
  ob->add_option("--in", observe_opts.in, "Quantum message file")->required();
  ob->add_option("--out,-o", observe_opts.out, "Observation file ('-' for stdout)");
  ob->add_option("--seed", observe_opts.seed, "Measurement seed");
  ob->add_option("--basis", observe_opts.basis, "Observation basis (default: writing basis)");
  ob->callback([&] { action = [&] { return cmd_observe(observe_opts, io); }; });

  VerifyOptions verify_opts;
  auto* ve = app.add_subcommand("verify", "Check a suspect observation for the watermark");
  ve->add_option("--suspect", verify_opts.suspect, "Suspect observation file")->required();
  ve->add_option("--reference", verify_opts.reference, "Reference observation file")->required();
  ve->add_option("--secret", verify_opts.secret, "Secret file")->required();
  ve->add_option("--rule", verify_opts.rule, "fixed:EPS | wilson:CONF | binom:CONF");
  ve->callback([&] { action = [&] { return cmd_verify(verify_opts, io); }; });

  AttackOptions attack_opts;
  auto* at = app.add_subcommand("attack", "Run an attack on observed copies");
  at->require_subcommand(1);
  auto add_report_options = [&](CLI::App* sub) {
    sub->add_option("--out,-o", attack_opts.out, "Attacked observation file");
    sub->add_option("--reference", attack_opts.reference, "Reference for the before/after report");
    sub->add_option("--secret", attack_opts.secret, "Secret for the before/after report");
    sub->add_option("--rule", attack_opts.rule, "Decision rule for the report");
  };
  auto* av = at->add_subcommand("averaging", "Majority vote over several copies");
  av->add_option("--copies", attack_opts.copies, "Observation files")->required()->expected(2, -1);
  add_report_options(av);
  av->callback([&] { action = [&] { return cmd_attack_averaging(attack_opts, io); }; });
  auto* no = at->add_subcommand("noise", "Flip each bit with a fixed probability");
  no->add_option("--in", attack_opts.in, "Observation file")->required();
  no->add_option("--rate", attack_opts.rate, "Flip probability")->required();
  no->add_option("--seed", attack_opts.seed, "Noise seed");
  add_report_options(no);
  no->callback([&] { action = [&] { return cmd_attack_noise(attack_opts, io); }; });
  auto* sh = at->add_subcommand("shift", "Shift bits up and pad the front");
  sh->add_option("--in", attack_opts.in, "Observation file")->required();
  sh->add_option("--offset", attack_opts.offset, "Shift amount in bits")->required();
  sh->add_option("--pad", attack_opts.pad, "Pad bit")->check(CLI::Range(0, 1));
  add_report_options(sh);
  sh->callback([&] { action = [&] { return cmd_attack_shift(attack_opts, io); }; });

  AnalyzeOptions analyze_opts;
  auto* an = app.add_subcommand("analyze", "Tabulate recommended watermark sizes");
  an->add_option("--pe", analyze_opts.pe, "Expected error probabilities")
      ->required()->delimiter(',');
  an->add_option("--null", analyze_opts.null_rate, "Flip rates of unmarked copies")
      ->delimiter(',');
  an->add_option("--confidence", analyze_opts.confidence, "Test confidences")->delimiter(',');
  an->add_option("--power", analyze_opts.power, "Target powers")->delimiter(',');
  an->callback([&] { action = [&] { return cmd_analyze(analyze_opts, io); }; });

  RenderOptions render_opts;
  auto* re = app.add_subcommand("render", "Write an observation back out as a payload");
  re->add_option("--in", render_opts.in, "Observation file")->required();
  re->add_option("--format", render_opts.format, "Payload format")
      ->check(CLI::IsMember({"raw", "pgm"}));
  re->add_option("--like", render_opts.like, "Original PGM supplying the header");
  re->add_option("--out,-o", render_opts.out, "Payload file ('-' for stdout)");
  re->callback([&] { action = [&] { return cmd_render(render_opts, io); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    return action();
  } catch (const std::exception& e) {
    err << "qumark: error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qumark::cli
