#include "meshtta/isa.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

namespace meshtta {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

std::optional<std::uint32_t> parse_uint(std::string_view tok) {
  if (tok.empty() || !std::isdigit(static_cast<unsigned char>(tok[0]))) return std::nullopt;
  std::uint32_t value = 0;
  int base = 10;
  std::string_view digits = tok;
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
    base = 16;
    digits = tok.substr(2);
  }
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

std::optional<int> socket_index(std::string_view tok, std::string_view prefix, int limit) {
  if (tok.size() != prefix.size() + 1 || tok.substr(0, prefix.size()) != prefix) return std::nullopt;
  char c = tok[prefix.size()];
  if (c < '0' || c >= '0' + limit) return std::nullopt;
  return c - '0';
}

std::optional<Src> parse_src_socket(const std::string& tok) {
  if (auto i = socket_index(tok, "rf.", 8)) return gpr_src(*i);
  if (auto i = socket_index(tok, "bool.", 2)) return bool_src(*i);
  if (tok == "alu.out") return Src::AluOut;
  if (tok == "logic.out") return Src::LogicOut;
  if (tok == "nfu.out") return Src::NfuOut;
  return std::nullopt;
}

std::optional<Dst> parse_dst_socket(const std::string& tok) {
  if (auto i = socket_index(tok, "rf.", 8)) return gpr_dst(*i);
  if (auto i = socket_index(tok, "bool.", 2)) return bool_dst(*i);
  if (tok == "alu.in2") return Dst::AluIn2;
  if (tok == "alu.trig.add") return Dst::AluTrigAdd;
  if (tok == "alu.trig.eq") return Dst::AluTrigEq;
  if (tok == "alu.trig.gtu") return Dst::AluTrigGtu;
  if (tok == "logic.in2") return Dst::LogicIn2;
  if (tok == "logic.trig.and") return Dst::LogicTrigAnd;
  if (tok == "logic.trig.or") return Dst::LogicTrigOr;
  if (tok == "logic.trig.xor") return Dst::LogicTrigXor;
  if (tok == "logic.trig.shr") return Dst::LogicTrigShr;
  if (tok == "logic.trig.shl") return Dst::LogicTrigShl;
  if (tok == "nfu.trig.read_neighbour") return Dst::NfuTrigReadNeighbour;
  if (tok == "nfu.trig.read_index") return Dst::NfuTrigReadIndex;
  if (tok == "nfu.trig.write_shared") return Dst::NfuTrigWriteShared;
  if (tok == "gcu.pc") return Dst::GcuPc;
  if (tok == "gcu.halt") return Dst::GcuHalt;
  return std::nullopt;
}

constexpr const char* kGuardedImmediateHint =
    "a guarded immediate move is not encodable; load the immediate into a GPR "
    "first, then use a guarded register move (e.g. \"5 -> RF.2\" then "
    "\"?bool.0 RF.2 -> RF.1\")";

void replace_all(std::string& s, std::string_view what, std::string_view with) {
  std::size_t pos = 0;
  while ((pos = s.find(what, pos)) != std::string::npos) {
    s.replace(pos, what.size(), with);
    pos += with.size();
  }
}

} // namespace

Src gpr_src(int index) {
  if (index < 0 || index >= 8) throw std::invalid_argument("GPR index out of range");
  return static_cast<Src>(index);
}

Dst gpr_dst(int index) {
  if (index < 0 || index >= 8) throw std::invalid_argument("GPR index out of range");
  return static_cast<Dst>(index);
}

Src bool_src(int index) {
  if (index < 0 || index >= 2) throw std::invalid_argument("BOOL index out of range");
  return static_cast<Src>(static_cast<int>(Src::Bool0) + index);
}

Dst bool_dst(int index) {
  if (index < 0 || index >= 2) throw std::invalid_argument("BOOL index out of range");
  return static_cast<Dst>(static_cast<int>(Dst::Bool0) + index);
}

std::string socket_name(Src s) {
  int id = static_cast<int>(s);
  if (id < 8) return "RF." + std::to_string(id);
  switch (s) {
    case Src::Bool0: return "BOOL.0";
    case Src::Bool1: return "BOOL.1";
    case Src::AluOut: return "ALU.out";
    case Src::LogicOut: return "LOGIC.out";
    case Src::NfuOut: return "NFU.out";
    default: break;
  }
  throw std::invalid_argument("invalid source socket id " + std::to_string(id));
}

std::string socket_name(Dst d) {
  int id = static_cast<int>(d);
  if (id < 8) return "RF." + std::to_string(id);
  switch (d) {
    case Dst::Bool0: return "BOOL.0";
    case Dst::Bool1: return "BOOL.1";
    case Dst::AluIn2: return "ALU.in2";
    case Dst::AluTrigAdd: return "ALU.trig.add";
    case Dst::AluTrigEq: return "ALU.trig.eq";
    case Dst::AluTrigGtu: return "ALU.trig.gtu";
    case Dst::LogicIn2: return "LOGIC.in2";
    case Dst::LogicTrigAnd: return "LOGIC.trig.and";
    case Dst::LogicTrigOr: return "LOGIC.trig.or";
    case Dst::LogicTrigXor: return "LOGIC.trig.xor";
    case Dst::LogicTrigShr: return "LOGIC.trig.shr";
    case Dst::LogicTrigShl: return "LOGIC.trig.shl";
    case Dst::NfuTrigReadNeighbour: return "NFU.trig.read_neighbour";
    case Dst::NfuTrigReadIndex: return "NFU.trig.read_index";
    case Dst::NfuTrigWriteShared: return "NFU.trig.write_shared";
    case Dst::GcuPc: return "GCU.pc";
    case Dst::GcuHalt: return "GCU.halt";
    default: break;
  }
  throw std::invalid_argument("invalid destination socket id " + std::to_string(id));
}

Program parse_program(std::string_view text, std::string name) {
  Program prog;
  prog.name = std::move(name);

  struct Fixup {
    std::size_t move_index;
    std::string label;
    std::size_t line;
  };
  std::vector<Fixup> fixups;
  struct NumericJump {
    std::size_t move_index;
    std::size_t line;
  };
  std::vector<NumericJump> numeric_jumps;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw_line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string line(raw_line);
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    replace_all(line, "→", "->");

    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t semi = line.find(';', start);
      std::string stmt(trim(std::string_view(line).substr(
          start, semi == std::string::npos ? std::string::npos : semi - start)));
      start = semi == std::string::npos ? line.size() + 1 : semi + 1;

      // leading labels
      while (true) {
        std::size_t colon = stmt.find(':');
        if (colon == std::string::npos) break;
        std::string label(trim(std::string_view(stmt).substr(0, colon)));
        if (!is_identifier(label)) break;
        if (prog.labels.count(label))
          throw ParseError(line_no, "duplicate label '" + label + "'");
        prog.labels[label] = prog.moves.size();
        stmt = std::string(trim(std::string_view(stmt).substr(colon + 1)));
      }
      if (stmt.empty()) continue;

      Guard guard = Guard::Always;
      bool has_guard = false;
      if (stmt[0] == '?' || stmt[0] == '!') {
        std::size_t sp = stmt.find_first_of(" \t");
        std::string gtok = lower(sp == std::string::npos ? stmt : stmt.substr(0, sp));
        bool inverted = gtok[0] == '!';
        auto idx = socket_index(std::string_view(gtok).substr(1), "bool.", 2);
        if (!idx)
          throw ParseError(line_no, "bad guard '" + gtok + "' (expected ?bool.N or !bool.N)");
        guard = inverted ? (*idx == 0 ? Guard::IfNotB0 : Guard::IfNotB1)
                         : (*idx == 0 ? Guard::IfB0 : Guard::IfB1);
        has_guard = true;
        stmt = sp == std::string::npos ? "" : std::string(trim(std::string_view(stmt).substr(sp)));
        if (stmt.empty()) throw ParseError(line_no, "guard without a move");
      }

      std::size_t arrow = stmt.find("->");
      if (arrow == std::string::npos) {
        std::istringstream iss(stmt);
        std::string op, arg, extra;
        iss >> op >> arg >> extra;
        std::string lop = lower(op);
        if (lop == "halt") {
          if (!arg.empty()) throw ParseError(line_no, "HALT takes no operand");
          if (has_guard) throw ParseError(line_no, std::string("HALT is an immediate move; ") + kGuardedImmediateHint);
          prog.moves.push_back(Move::imm(0, Dst::GcuHalt));
          continue;
        }
        if (lop == "jump") {
          if (arg.empty() || !extra.empty())
            throw ParseError(line_no, "JUMP takes exactly one target");
          if (has_guard) throw ParseError(line_no, std::string("JUMP is an immediate move; ") + kGuardedImmediateHint);
          if (auto v = parse_uint(arg)) {
            if (*v > 0xFFFF) throw ParseError(line_no, "jump target out of immediate range");
            numeric_jumps.push_back({prog.moves.size(), line_no});
            prog.moves.push_back(Move::imm(static_cast<std::uint16_t>(*v), Dst::GcuPc));
          } else if (is_identifier(arg)) {
            fixups.push_back({prog.moves.size(), arg, line_no});
            prog.moves.push_back(Move::imm(0, Dst::GcuPc));
          } else {
            throw ParseError(line_no, "bad jump target '" + arg + "'");
          }
          continue;
        }
        throw ParseError(line_no, "expected '->' in '" + stmt + "'");
      }

      std::string src_tok(trim(std::string_view(stmt).substr(0, arrow)));
      std::string dst_tok(trim(std::string_view(stmt).substr(arrow + 2)));
      if (src_tok.empty() || dst_tok.empty())
        throw ParseError(line_no, "move needs a source and a destination");
      if (src_tok.find_first_of(" \t") != std::string::npos)
        throw ParseError(line_no, "unexpected token in source operand '" + src_tok + "'");
      if (dst_tok.find_first_of(" \t") != std::string::npos)
        throw ParseError(line_no, "unexpected token in destination operand '" + dst_tok + "'");

      auto dst = parse_dst_socket(lower(dst_tok));
      if (!dst) throw ParseError(line_no, "unknown destination socket '" + dst_tok + "'");

      if (auto v = parse_uint(src_tok)) {
        if (*v > 0xFFFF)
          throw ParseError(line_no, "immediate " + src_tok + " does not fit in 16 bits");
        if (has_guard) throw ParseError(line_no, kGuardedImmediateHint);
        prog.moves.push_back(Move::imm(static_cast<std::uint16_t>(*v), *dst));
      } else {
        auto src = parse_src_socket(lower(src_tok));
        if (!src) throw ParseError(line_no, "unknown source socket '" + src_tok + "'");
        prog.moves.push_back(Move::reg(guard, *src, *dst));
      }
    }
  }

  for (const auto& fix : fixups) {
    auto it = prog.labels.find(fix.label);
    if (it == prog.labels.end())
      throw ParseError(fix.line, "unresolved label '" + fix.label + "'");
    prog.moves[fix.move_index].immediate = static_cast<std::uint16_t>(it->second);
  }
  for (const auto& jump : numeric_jumps) {
    if (prog.moves[jump.move_index].immediate > prog.moves.size())
      throw ParseError(jump.line, "jump target past end of program");
  }
  return prog;
}

std::uint32_t encode_instruction(const Move& m) {
  if (static_cast<int>(m.dst) >= kDstCount)
    throw std::invalid_argument("invalid destination socket");
  if (m.uses_immediate) {
    if (m.guard != Guard::Always)
      throw std::invalid_argument("immediate-form move must be unguarded");
    return (1u << 22) | (static_cast<std::uint32_t>(m.immediate) << 6) |
           static_cast<std::uint32_t>(m.dst);
  }
  if (static_cast<int>(m.src) >= kSrcCount)
    throw std::invalid_argument("invalid source socket");
  return (static_cast<std::uint32_t>(m.guard) << 19) |
         (static_cast<std::uint32_t>(m.src) << 13) |
         (static_cast<std::uint32_t>(m.dst) << 7);
}

Move decode_instruction(std::uint32_t word) {
  if (word >> kInstructionBits)
    throw DecodeError("instruction word wider than 23 bits");
  if (word & (1u << 22)) {
    std::uint32_t dst = word & 0x3F;
    if (dst >= kDstCount)
      throw DecodeError("malformed instruction: destination id " + std::to_string(dst));
    return Move::imm(static_cast<std::uint16_t>((word >> 6) & 0xFFFF), static_cast<Dst>(dst));
  }
  std::uint32_t guard = (word >> 19) & 0x7;
  std::uint32_t src = (word >> 13) & 0x3F;
  std::uint32_t dst = (word >> 7) & 0x3F;
  if (word & 0x7F) throw DecodeError("malformed instruction: nonzero reserved bits");
  if (guard >= kGuardCount)
    throw DecodeError("malformed instruction: guard code " + std::to_string(guard));
  if (src >= kSrcCount)
    throw DecodeError("malformed instruction: source id " + std::to_string(src));
  if (dst >= kDstCount)
    throw DecodeError("malformed instruction: destination id " + std::to_string(dst));
  return Move::reg(static_cast<Guard>(guard), static_cast<Src>(src), static_cast<Dst>(dst));
}

std::string disassemble_move(const Move& m) {
  std::string out;
  switch (m.guard) {
    case Guard::Always: break;
    case Guard::IfB0: out += "?bool.0 "; break;
    case Guard::IfB1: out += "?bool.1 "; break;
    case Guard::IfNotB0: out += "!bool.0 "; break;
    case Guard::IfNotB1: out += "!bool.1 "; break;
  }
  out += m.uses_immediate ? std::to_string(m.immediate) : socket_name(m.src);
  out += " -> ";
  out += socket_name(m.dst);
  return out;
}

std::string disassemble(const Program& p) {
  std::map<std::size_t, std::string> label_at;
  for (const Move& m : p.moves) {
    if (m.uses_immediate && m.dst == Dst::GcuPc && m.immediate <= p.moves.size())
      label_at.emplace(m.immediate, "L" + std::to_string(m.immediate));
  }

  std::string out;
  if (!p.name.empty()) out += "# " + p.name + "\n";
  for (std::size_t i = 0; i < p.moves.size(); ++i) {
    if (auto it = label_at.find(i); it != label_at.end()) out += it->second + ":\n";
    const Move& m = p.moves[i];
    if (m.uses_immediate && m.dst == Dst::GcuHalt && m.immediate == 0) {
      out += "HALT\n";
    } else if (m.uses_immediate && m.dst == Dst::GcuPc && m.immediate <= p.moves.size()) {
      out += "JUMP L" + std::to_string(m.immediate) + "\n";
    } else {
      out += disassemble_move(m) + "\n";
    }
  }
  if (auto it = label_at.find(p.moves.size()); it != label_at.end()) out += it->second + ":\n";
  return out;
}

namespace {
void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
} // namespace

std::vector<std::uint8_t> to_binary(const Program& p) {
  std::vector<std::uint8_t> out = {'T', 'T', 'A', 'M', 1};
  put_u32le(out, static_cast<std::uint32_t>(p.moves.size()));
  for (const Move& m : p.moves) put_u32le(out, encode_instruction(m));
  return out;
}

Program from_binary(const std::vector<std::uint8_t>& bytes, std::string name) {
  if (bytes.size() < 9 || bytes[0] != 'T' || bytes[1] != 'T' || bytes[2] != 'A' || bytes[3] != 'M')
    throw DecodeError("not a TTAM program file");
  if (bytes[4] != 1)
    throw DecodeError("unsupported TTAM version " + std::to_string(bytes[4]));
  std::uint32_t count = get_u32le(bytes.data() + 5);
  if (bytes.size() != 9 + static_cast<std::size_t>(count) * 4)
    throw DecodeError("TTAM file is truncated or oversized");
  Program prog;
  prog.name = std::move(name);
  prog.moves.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t word = get_u32le(bytes.data() + 9 + i * 4);
    if (word >> kInstructionBits)
      throw DecodeError("instruction " + std::to_string(i) + ": bits 31-23 must be zero");
    prog.moves.push_back(decode_instruction(word));
  }
  return prog;
}

} // namespace meshtta
