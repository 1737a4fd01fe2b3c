#include "formats.hpp"

#include <sodium.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"
#include "qumark/error.hpp"

namespace qumark::formats {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedFile, what);
}

Json parse_document(std::string_view text, const char* kind) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    malformed(std::string(kind) + ": " + e.what());
  }
  if (!doc.is_object()) malformed(std::string(kind) + ": expected a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    malformed(std::string(kind) + ": missing integer field 'version'");
  }
  if (doc["version"].get<int>() != kFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                std::string(kind) + " version " +
                    std::to_string(doc["version"].get<long long>()) +
                    " is not supported (expected " +
                    std::to_string(kFormatVersion) + ")");
  }
  return doc;
}

const Json& field(const Json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) malformed(std::string("missing field '") + name + "'");
  return *it;
}

std::uint64_t unsigned_field(const Json& doc, const char* name) {
  const Json& v = field(doc, name);
  if (!v.is_number_unsigned()) {
    malformed(std::string("field '") + name + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double angle_field(const Json& doc, const char* name) {
  const Json& v = field(doc, name);
  if (!v.is_string()) malformed(std::string("field '") + name + "' must be a string");
  return parse_angle(v.get_ref<const std::string&>());
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string format_angle(double degrees) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", degrees);
  return buf;
}

double parse_angle(std::string_view text) {
  // DIGITS "." SIX-DIGITS, nothing else.
  auto dot = text.find('.');
  bool ok = dot != std::string_view::npos && dot > 0 && text.size() - dot - 1 == 6;
  for (std::size_t i = 0; ok && i < text.size(); ++i) {
    ok = i == dot || (text[i] >= '0' && text[i] <= '9');
  }
  if (!ok) malformed("angle '" + std::string(text) + "' is not in ddd.dddddd form");
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    malformed("angle '" + std::string(text) + "' is not a number");
  }
  return value;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium failed to initialise");
  constexpr int variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_ENCODED_LEN(bytes.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), variant);
  out.resize(out.size() - 1);  // drop the terminator
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium failed to initialise");
  std::vector<std::uint8_t> out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr,
                        &len, &end, sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    malformed("invalid base64 payload");
  }
  out.resize(len);
  return out;
}

WatermarkSecret SecretFile::to_secret() const {
  for (std::size_t i : indices) {
    if (i >= message_length) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "secret index " + std::to_string(i) +
                      " out of range for message length " +
                      std::to_string(message_length));
    }
  }
  return WatermarkSecret(indices, Basis(mark_basis_theta), key);
}

SecretFile SecretFile::from_secret(const WatermarkSecret& secret,
                                   std::size_t message_length,
                                   const Basis& writing_basis) {
  SecretFile f;
  f.message_length = message_length;
  f.indices.assign(secret.indices().begin(), secret.indices().end());
  f.mark_basis_theta = secret.mark_basis().theta();
  f.writing_basis_theta = writing_basis.theta();
  f.expected_pe = expected_error_probability(secret.mark_basis(), writing_basis);
  f.key = secret.key();
  return f;
}

std::string encode(const SecretFile& file) {
  Json doc;
  doc["version"] = kFormatVersion;
  doc["message_length"] = file.message_length;
  doc["indices"] = file.indices;
  doc["mark_basis_theta"] = format_angle(file.mark_basis_theta);
  doc["writing_basis_theta"] = format_angle(file.writing_basis_theta);
  doc["expected_pe"] = file.expected_pe;
  if (file.key) doc["key"] = base64_encode(*file.key);
  return dump(doc);
}

SecretFile decode_secret(std::string_view text) {
  Json doc = parse_document(text, "secret file");
  SecretFile f;
  f.message_length = unsigned_field(doc, "message_length");
  const Json& indices = field(doc, "indices");
  if (!indices.is_array()) malformed("field 'indices' must be an array");
  for (const auto& v : indices) {
    if (!v.is_number_unsigned()) malformed("indices must be nonnegative integers");
    f.indices.push_back(v.get<std::size_t>());
  }
  f.mark_basis_theta = angle_field(doc, "mark_basis_theta");
  f.writing_basis_theta = angle_field(doc, "writing_basis_theta");
  const Json& pe = field(doc, "expected_pe");
  if (!pe.is_number()) malformed("field 'expected_pe' must be a number");
  f.expected_pe = pe.get<double>();
  if (doc.contains("key")) {
    if (!doc["key"].is_string()) malformed("field 'key' must be a base64 string");
    f.key = base64_decode(doc["key"].get_ref<const std::string&>());
  }
  return f;
}

QuantumMessage QuantumMessageFile::to_message() const {
  std::vector<RebitState> out;
  out.reserve(states.size());
  for (double phi : states) out.emplace_back(phi);
  return QuantumMessage(std::move(out), Basis(writing_basis_theta));
}

QuantumMessageFile QuantumMessageFile::from_message(const QuantumMessage& message) {
  QuantumMessageFile f;
  f.writing_basis_theta = message.writing_basis().theta();
  for (const auto& s : message.states()) f.states.push_back(s.phi());
  return f;
}

std::string encode(const QuantumMessageFile& file) {
  Json doc;
  doc["version"] = kFormatVersion;
  doc["writing_basis_theta"] = format_angle(file.writing_basis_theta);
  Json states = Json::array();
  for (double phi : file.states) states.push_back(format_angle(phi));
  doc["states"] = std::move(states);
  return dump(doc);
}

QuantumMessageFile decode_message(std::string_view text) {
  Json doc = parse_document(text, "quantum message file");
  QuantumMessageFile f;
  f.writing_basis_theta = angle_field(doc, "writing_basis_theta");
  if (f.writing_basis_theta >= 90.0) malformed("writing basis must lie in [0, 90)");
  const Json& states = field(doc, "states");
  if (!states.is_array() || states.empty()) malformed("field 'states' must be a nonempty array");
  f.states.reserve(states.size());
  for (const auto& v : states) {
    if (!v.is_string()) malformed("states must be angle strings");
    double phi = parse_angle(v.get_ref<const std::string&>());
    if (phi >= 180.0) malformed("state angle must lie in [0, 180)");
    f.states.push_back(phi);
  }
  return f;
}

ObservedMessage ObservationFile::to_observation() const {
  return ObservedMessage{bits, Basis(observation_basis_theta)};
}

ObservationFile ObservationFile::from_observation(const ObservedMessage& observed) {
  return ObservationFile{observed.observation_basis.theta(), observed.bits};
}

std::string encode(const ObservationFile& file) {
  Json doc;
  doc["version"] = kFormatVersion;
  doc["observation_basis_theta"] = format_angle(file.observation_basis_theta);
  doc["bit_length"] = file.bits.size();
  doc["bits"] = base64_encode(pack_bits(file.bits));
  return dump(doc);
}

ObservationFile decode_observation(std::string_view text) {
  Json doc = parse_document(text, "observation file");
  ObservationFile f;
  f.observation_basis_theta = angle_field(doc, "observation_basis_theta");
  if (f.observation_basis_theta >= 90.0) malformed("observation basis must lie in [0, 90)");
  std::uint64_t bit_length = unsigned_field(doc, "bit_length");
  const Json& bits = field(doc, "bits");
  if (!bits.is_string()) malformed("field 'bits' must be a base64 string");
  std::vector<std::uint8_t> packed = base64_decode(bits.get_ref<const std::string&>());
  if (bit_length == 0 || bit_length > 8 * packed.size() ||
      8 * packed.size() >= bit_length + 8) {
    malformed("bit_length " + std::to_string(bit_length) +
              " does not match a payload of " + std::to_string(packed.size()) +
              " bytes");
  }
  f.bits = unpack_bytes(packed);
  for (std::size_t i = bit_length; i < f.bits.size(); ++i) {
    if (f.bits[i]) malformed("padding bits after bit_length must be zero");
  }
  f.bits.resize(bit_length);
  return f;
}

}  // namespace qumark::formats
