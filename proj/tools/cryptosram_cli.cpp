// cryptosram: run the in-SRAM kernels from the command line.
//
// Exit codes: 0 success, 1 oracle mismatch or failed authentication,
// 2 usage error, 3 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "cryptosram/aes_kernels.hpp"
#include "cryptosram/controller.hpp"
#include "cryptosram/error.hpp"
#include "cryptosram/ghash_kernels.hpp"
#include "cryptosram/isa.hpp"
#include "cryptosram/keccak_kernels.hpp"
#include "cryptosram/modes.hpp"
#include "cryptosram/perfmodel.hpp"
#include "cryptosram/program_io.hpp"

using namespace csram;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kIo = 3 };

struct Mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Bytes read_file(const std::string& path) {
  if (path == "-") return Bytes(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

std::string read_text(const std::string& path) {
  const auto b = read_file(path);
  return std::string(b.begin(), b.end());
}

void write_file(const std::string& path, ByteView data) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size())))
    throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
}

// Text goes to --out when given, else stdout.
void emit_text(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  write_file(out, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Binary results: raw bytes to --out, hex line to stdout otherwise.
void emit_bytes(const std::string& out, ByteView data) {
  if (out.empty())
    std::cout << to_hex(data) << "\n";
  else
    write_file(out, data);
}

struct Input {
  std::string path;
  std::string hex;

  Bytes load() const {
    if (!hex.empty()) return from_hex(hex);
    if (!path.empty()) return read_file(path);
    return {};
  }
};

void add_input(CLI::App* cmd, Input& in) {
  cmd->add_option("--in", in.path, "Input file ('-' for stdin)");
  cmd->add_option("--msg", in.hex, "Input as hex (instead of --in)");
}

void check(bool verify, ByteView fabric, ByteView oracle, const std::string& what) {
  if (verify && !std::equal(fabric.begin(), fabric.end(), oracle.begin(), oracle.end()))
    throw Mismatch(what + ": fabric output differs from the oracle");
}

KatAlgorithm parse_alg(const std::string& alg, KatAlgorithm::Kind want) {
  auto a = parse_kat_algorithm(alg);
  if (want == KatAlgorithm::Kind::kHmac && (!a || a->kind == KatAlgorithm::Kind::kSha3))
    a = parse_kat_algorithm("HMAC-" + alg);
  const bool ok = a && (a->kind == want || (want == KatAlgorithm::Kind::kEcb && a->kind != KatAlgorithm::Kind::kSha3 &&
                                            a->kind != KatAlgorithm::Kind::kHmac &&
                                            a->kind != KatAlgorithm::Kind::kGhash));
  if (!ok) throw CLI::ValidationError("--alg", "unsupported algorithm '" + alg + "'");
  return *a;
}

// --- encrypt -----------------------------------------------------------------

struct EncryptOpts {
  std::string alg = "AES-128";
  std::string mode = "ecb";
  std::string key, iv, aad, out;
  Input in;
  bool decrypt = false;
  bool no_verify = false;
  std::size_t tag_length = 16;
};

Bytes oracle_mode(const ModeSpec& s, ByteView key, ByteView data, ByteView aad) {
  const bool enc = s.direction == CipherDirection::kEncrypt;
  switch (s.mode) {
    case CipherMode::kNone:
    case CipherMode::kEcb: {
      Bytes out;
      for (std::size_t i = 0; i + 16 <= data.size(); i += 16) {
        Block b;
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(i), 16, b.begin());
        const auto c = enc ? oracle::aes_encrypt_block(key, b) : oracle::aes_decrypt_block(key, b);
        out.insert(out.end(), c.begin(), c.end());
      }
      return out;
    }
    case CipherMode::kCbc: return enc ? oracle::cbc_encrypt(key, s.iv, data) : oracle::cbc_decrypt(key, s.iv, data);
    case CipherMode::kCtr: {
      Block c;
      std::copy_n(s.iv.begin(), 16, c.begin());
      return oracle::ctr_crypt(key, c, data);
    }
    case CipherMode::kCcm:
      if (enc) {
        const auto r = oracle::ccm_encrypt(key, s.iv, aad, data, s.tag_length);
        return concat(r.ciphertext, r.tag);
      }
      return oracle::ccm_decrypt(key, s.iv, aad, data.first(data.size() - s.tag_length), data.last(s.tag_length));
    case CipherMode::kGcm:
      if (enc) {
        const auto r = oracle::gcm_encrypt(key, s.iv, aad, data);
        return concat(r.ciphertext, r.tag);
      }
      return oracle::gcm_decrypt(key, s.iv, aad, data.first(data.size() - 16), data.last(16));
  }
  return {};
}

int cmd_encrypt(const EncryptOpts& o) {
  const auto alg = parse_alg(o.alg, KatAlgorithm::Kind::kEcb);
  ModeSpec s;
  s.variant = alg.aes;
  s.mode = cipher_mode_from_string(o.mode);
  s.direction = o.decrypt ? CipherDirection::kDecrypt : CipherDirection::kEncrypt;
  s.iv = from_hex(o.iv);
  s.tag_length = o.tag_length;
  const auto key = from_hex(o.key);
  if (key.size() != aes_key_bytes(s.variant))
    throw CLI::ValidationError("--key", std::to_string(key.size()) + " bytes; " + o.alg + " needs " +
                                            std::to_string(aes_key_bytes(s.variant)));
  const auto aad = from_hex(o.aad);
  const auto data = o.in.load();

  const auto r = run_mode(s, key, data, aad);
  if (!o.no_verify) check(true, r.output, oracle_mode(s, key, data, aad), o.alg + " " + o.mode);
  emit_bytes(o.out, r.output);
  std::cerr << "fabric cycles: " << r.cost.total_cycles() << " (aes " << r.cost.aes_passes << " passes, ghash "
            << r.cost.ghash_passes << " passes)\n";
  return kOk;
}

// --- hash / hmac -------------------------------------------------------------

struct HashOpts {
  std::string alg = "SHA3-256";
  std::string key, out;
  Input in;
  bool no_verify = false;
};

int cmd_hash(const HashOpts& o, bool hmac) {
  const auto alg = parse_alg(o.alg, hmac ? KatAlgorithm::Kind::kHmac : KatAlgorithm::Kind::kSha3);
  const auto msg = o.in.load();
  const Bytes msgs[] = {msg};
  Sha3Digests d;
  Bytes expect;
  if (hmac) {
    const Bytes keys[] = {from_hex(o.key)};
    d = hmac_pass(alg.sha, keys, msgs);
    expect = oracle::hmac_sha3(alg.sha, keys[0], msg);
  } else {
    d = sha3_pass(alg.sha, msgs);
    expect = oracle::sha3(alg.sha, msg);
  }
  if (!o.no_verify) check(true, d.digests[0], expect, o.alg);
  emit_bytes(o.out, d.digests[0]);
  std::cerr << "fabric cycles: " << d.cycles << " (" << d.permutations << " permutations)\n";
  return kOk;
}

// --- kat ---------------------------------------------------------------------

int cmd_kat(const std::string& path) {
  const auto kats = load_kat(path);
  std::size_t bad = 0;
  for (const auto& k : kats) {
    const auto out = fabric_output(k);
    const bool ok = out == k.out;
    bad += !ok;
    std::cout << (ok ? "ok   " : "FAIL ") << k.alg << " (line " << k.line << ")\n";
  }
  std::cout << kats.size() - bad << "/" << kats.size() << " known-answer tests match\n";
  return bad ? kMismatch : kOk;
}

// --- programs ------------------------------------------------------------------

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "aes-128-encrypt", "aes-128-decrypt", "aes-256-encrypt", "aes-256-decrypt", "ghash",
      "sha3-224",        "sha3-256",        "sha3-384",        "sha3-512",        "hmac-sha3-224",
      "hmac-sha3-256",   "hmac-sha3-384",   "hmac-sha3-512"};
  return names;
}

KernelProgram builtin_program(const std::string& name) {
  if (name.rfind("aes-", 0) == 0) {
    const auto v = name.substr(4, 3) == "128" ? AesVariant::k128 : AesVariant::k256;
    return build_aes_program(v, name.ends_with("encrypt") ? CipherDirection::kEncrypt : CipherDirection::kDecrypt);
  }
  if (name == "ghash") return build_ghash_program(kGhashBlocksPerPass, true);
  const bool hmac = name.rfind("hmac-", 0) == 0;
  auto upper = hmac ? name.substr(5) : name;
  std::ranges::transform(upper, upper.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  const auto alg = parse_kat_algorithm(upper);
  if (alg && alg->kind == KatAlgorithm::Kind::kSha3)
    return hmac ? build_hmac_program(alg->sha, 2) : build_sha3_program(alg->sha, 1);
  throw CLI::ValidationError("--program", "unknown program '" + name + "'");
}

KernelProgram load_any_program(const std::string& name, const std::string& path) {
  if (!path.empty()) return program_from_json(read_text(path));
  if (name.empty()) throw CLI::ValidationError("--program", "give --program <name> or --in <program.json>");
  return builtin_program(name);
}

// --- asm / disasm --------------------------------------------------------------

int cmd_asm(const std::string& in, const std::string& out, bool hex) {
  const auto cmds = assemble(read_text(in));
  if (hex || out.empty()) {
    std::ostringstream os;
    for (const auto& c : cmds) os << std::hex << std::setw(4) << std::setfill('0') << encode(c) << "\n";
    emit_text(out, os.str());
  } else {
    write_file(out, to_binary(cmds));
  }
  return kOk;
}

int cmd_disasm(const std::string& in, const std::string& out, bool hex) {
  std::vector<std::uint16_t> words;
  if (hex) {
    std::istringstream is(read_text(in));
    std::string tok;
    while (is >> tok) words.push_back(static_cast<std::uint16_t>(std::stoul(tok, nullptr, 16)));
  } else {
    const auto bytes = read_file(in);
    if (bytes.size() % 2) throw Error(ErrorCode::kParseError, "odd byte count in a command stream");
    for (std::size_t i = 0; i < bytes.size(); i += 2)
      words.push_back(static_cast<std::uint16_t>(bytes[i] << 8 | bytes[i + 1]));
  }
  std::vector<CommandWord> cmds;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!is_valid_opcode(static_cast<std::uint8_t>(words[i] >> 12))) {
      std::cerr << "error: invalid opcode in word " << i << " (byte offset " << 2 * i << "): 0x" << std::hex
                << std::setw(4) << std::setfill('0') << words[i] << "\n";
      return kUsage;
    }
    cmds.push_back(decode(words[i]));
  }
  auto listing = disassemble(cmds);
  if (!listing.empty() && listing.back() != '\n') listing += '\n';
  emit_text(out, listing);
  return kOk;
}

// --- trace -----------------------------------------------------------------------

int cmd_trace(const std::string& name, const std::string& path, const std::string& level, const std::string& out) {
  const auto program = load_any_program(name, path);
  Bindings zeros;
  for (const auto& step : program.schedule)
    if (const auto* h = std::get_if<HostAction>(&step); h && h->kind == HostAction::Kind::kLoadBinding)
      zeros.emplace(h->binding, Row{});
  const Controller ctrl(program);
  Subarray sub(program.geometry.m ? program.geometry.m : kColumns);
  std::vector<TraceRecord> trace;
  const auto stats = ctrl.run_traced(sub, trace, zeros, level == "latch");

  std::ostringstream os;
  if (level != "summary")
    for (const auto& r : trace) {
      os << r.sequence << "\t" << std::hex << std::setw(4) << std::setfill('0') << r.word << std::dec << "\t"
         << disassemble_one(decode(r.word)) << "\t" << r.cycles;
      if (r.latch) os << "\t" << r.latch->to_hex();
      os << "\n";
    }
  for (const auto& f : stats.functions)
    os << "# " << f.name << ": " << f.inst_count << " commands x " << f.iterations << " = " << f.commands
       << " executed, " << f.cycles << " cycles\n";
  os << "# records " << trace.size() << ", commands " << stats.total_commands << ", cycles " << stats.total_cycles
     << "\n";
  emit_text(out, os.str());
  return kOk;
}

// --- bench -----------------------------------------------------------------------

struct BenchOpts {
  double fraction = 100;
  std::string power_mode = "RUN-Range0";
  std::uint64_t cycles_per_command = 1;
  std::uint64_t shift_cost = 1;
  std::string calibration = "auto";
  double power_factor = 1.0;
  std::string format = "text";
  std::string out;
};

Calibration parse_calibration(const std::string& s, PerfModel& model) {
  if (s == "auto") return calibrate(model);
  if (s == "none" || s == "1") return {};
  Calibration c;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--calibration", "expected family=value, got '" + item + "'");
    const auto fam = item.substr(0, eq);
    const double v = std::stod(item.substr(eq + 1));
    if (fam == "aes") c.aes = v;
    else if (fam == "sha3") c.sha3 = v;
    else if (fam == "ghash") c.ghash = v;
    else throw CLI::ValidationError("--calibration", "unknown family '" + fam + "'");
  }
  return c;
}

int cmd_bench(const BenchOpts& o) {
  PerfModel model({o.cycles_per_command, o.shift_cost});
  const auto cal = parse_calibration(o.calibration, model);
  const auto report = build_report(model, cal, o.power_factor);
  const auto cmp = compare_to_reference(report);

  FabricConfig cfg;
  cfg.isc_fraction = o.fraction / 100.0;
  cfg.costs = model.costs();
  cfg.calibration = cal;
  cfg.isc_power_factor = o.power_factor;
  cfg.validate();
  const auto& mode = find_power_mode(o.power_mode);

  if (o.format == "json") {
    emit_text(o.out, format_json(report, &cmp) + "\n");
    return kOk;
  }
  std::ostringstream os;
  os << format_text(report, &cmp);
  os << "\nSelected configuration: " << o.fraction << "% ISC, " << mode.name << "\n";
  for (const auto& k : report.kernels) {
    Workload w;
    for (auto kind : {WorkloadKind::kAesCbc, WorkloadKind::kAesCcm, WorkloadKind::kAesGcm, WorkloadKind::kSha3,
                      WorkloadKind::kHmac})
      for (auto v : {AesVariant::k128, AesVariant::k256})
        for (auto d : {CipherDirection::kEncrypt, CipherDirection::kDecrypt})
          for (auto sv : {Sha3Variant::k224, Sha3Variant::k256, Sha3Variant::k384, Sha3Variant::k512}) {
            const Workload c{kind, v, d, sv};
            if (c.label() == k.workload) w = c;
          }
    const double t = throughput(model.cost(w), cfg, mode);
    os << "  " << std::left << std::setw(24) << k.workload << std::right << std::fixed << std::setprecision(3)
       << std::setw(10) << t / 1e6 << " MB/s" << std::setprecision(4) << std::setw(10)
       << energy_efficiency(t, mode, o.power_factor) / 1e9 << " GB/s/W\n";
  }
  emit_text(o.out, os.str());
  return kOk;
}

int error_exit(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError: return kIo;
    case ErrorCode::kTagMismatch: return kMismatch;
    default: return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cryptosram: bit-serial in-SRAM crypto kernels on a simulated subarray"};
  app.require_subcommand(1);

  EncryptOpts enc;
  auto* c_enc = app.add_subcommand("encrypt", "AES in a block-cipher mode on the fabric");
  c_enc->add_option("--alg", enc.alg, "AES-128 or AES-256")->capture_default_str();
  c_enc->add_option("--mode", enc.mode, "none, ecb, cbc, ctr, ccm, gcm")->capture_default_str();
  c_enc->add_option("--key", enc.key, "Key (hex)")->required();
  c_enc->add_option("--iv", enc.iv, "IV, initial counter or nonce (hex)");
  c_enc->add_option("--aad", enc.aad, "Associated data for ccm/gcm (hex)");
  c_enc->add_option("--tag-length", enc.tag_length, "CCM tag bytes")->capture_default_str();
  c_enc->add_option("--out", enc.out, "Output file (raw bytes); hex on stdout otherwise");
  c_enc->add_flag("--decrypt,-d", enc.decrypt, "Decrypt (AEAD input is ciphertext || tag)");
  c_enc->add_flag("--no-verify", enc.no_verify, "Skip the oracle cross-check");
  add_input(c_enc, enc.in);

  HashOpts hash;
  auto* c_hash = app.add_subcommand("hash", "SHA3 digest on the fabric");
  c_hash->add_option("--alg", hash.alg, "SHA3-224, SHA3-256, SHA3-384 or SHA3-512")->capture_default_str();
  c_hash->add_option("--out", hash.out, "Output file (raw bytes)");
  c_hash->add_flag("--no-verify", hash.no_verify, "Skip the oracle cross-check");
  add_input(c_hash, hash.in);

  HashOpts mac;
  auto* c_hmac = app.add_subcommand("hmac", "HMAC-SHA3 on the fabric");
  c_hmac->add_option("--alg", mac.alg, "SHA3 variant (HMAC- prefix optional)")->capture_default_str();
  c_hmac->add_option("--key", mac.key, "Key (hex)")->required();
  c_hmac->add_option("--out", mac.out, "Output file (raw bytes)");
  c_hmac->add_flag("--no-verify", mac.no_verify, "Skip the oracle cross-check");
  add_input(c_hmac, mac.in);

  std::string kat_path;
  auto* c_kat = app.add_subcommand("kat", "Run a known-answer file through the fabric");
  c_kat->add_option("--in", kat_path, "KAT file")->required();

  BenchOpts bench;
  auto* c_bench = app.add_subcommand("bench", "Throughput, efficiency and control-overhead report");
  c_bench->add_option("--fraction", bench.fraction, "ISC-enabled share of SRAM in percent (25, 50, 100)")
      ->check(CLI::IsMember({25.0, 50.0, 100.0}))
      ->capture_default_str();
  c_bench->add_option("--power-mode", bench.power_mode, "RUN-Range0, RUN-Range2 or SLEEP")->capture_default_str();
  c_bench->add_option("--cycles-per-command", bench.cycles_per_command, "Base cycles per command")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_bench->add_option("--shift-cost", bench.shift_cost, "Cycles per 1-bit shift step")->capture_default_str();
  c_bench->add_option("--calibration", bench.calibration, "auto, none, or aes=..,sha3=..,ghash=..")
      ->capture_default_str();
  c_bench->add_option("--power-factor", bench.power_factor, "ISC power factor (>= 1)")->capture_default_str();
  c_bench->add_option("--format", bench.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  c_bench->add_option("--out", bench.out, "Report file");

  std::string asm_in, asm_out;
  bool asm_hex = false;
  auto* c_asm = app.add_subcommand("asm", "Assemble a listing into command words");
  c_asm->add_option("--in", asm_in, "Assembly listing")->required();
  c_asm->add_option("--out", asm_out, "Binary output (big-endian words); hex words on stdout otherwise");
  c_asm->add_flag("--hex", asm_hex, "Write hex words even with --out");

  std::string dis_in, dis_out;
  bool dis_hex = false;
  auto* c_dis = app.add_subcommand("disasm", "Disassemble command words");
  c_dis->add_option("--in", dis_in, "Binary command stream (or hex words with --hex)")->required();
  c_dis->add_option("--out", dis_out, "Listing file");
  c_dis->add_flag("--hex", dis_hex, "Input is whitespace-separated hex words");

  std::string tr_prog, tr_in, tr_level = "commands", tr_out;
  auto* c_trace = app.add_subcommand("trace", "Replay a program and print one record per command");
  c_trace->add_option("--program", tr_prog, "Built-in program name");
  c_trace->add_option("--in", tr_in, "Program JSON file");
  c_trace->add_option("--trace", tr_level, "summary, commands or latch")
      ->check(CLI::IsMember({"summary", "commands", "latch"}))
      ->capture_default_str();
  c_trace->add_option("--out", tr_out, "Trace file");

  std::string pd_name, pd_out;
  bool pd_list = false, pd_listing = false;
  auto* c_prog = app.add_subcommand("program", "Dump a built-in program as JSON");
  c_prog->add_option("--program", pd_name, "Built-in program name");
  c_prog->add_option("--out", pd_out, "Output file");
  c_prog->add_flag("--list", pd_list, "List built-in program names");
  c_prog->add_flag("--listing", pd_listing, "Write the command array as an assembly listing instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*c_enc) return cmd_encrypt(enc);
    if (*c_hash) return cmd_hash(hash, false);
    if (*c_hmac) return cmd_hash(mac, true);
    if (*c_kat) return cmd_kat(kat_path);
    if (*c_bench) return cmd_bench(bench);
    if (*c_asm) return cmd_asm(asm_in, asm_out, asm_hex);
    if (*c_dis) return cmd_disasm(dis_in, dis_out, dis_hex);
    if (*c_trace) return cmd_trace(tr_prog, tr_in, tr_level, tr_out);
    if (*c_prog) {
      if (pd_list) {
        std::ostringstream os;
        for (const auto& n : builtin_names()) os << n << "\n";
        emit_text(pd_out, os.str());
        return kOk;
      }
      const auto prog = load_any_program(pd_name, "");
      if (pd_listing) {
        auto listing = disassemble(prog.command_array.words);
        if (!listing.empty() && listing.back() != '\n') listing += '\n';
        emit_text(pd_out, listing);
        return kOk;
      }
      emit_text(pd_out, program_to_json(prog) + "\n");
      return kOk;
    }
  } catch (const Mismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMismatch;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return error_exit(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
