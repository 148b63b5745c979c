#pragma once

// Transport instruction set of the mesh PE core. A program is a sequence of
// guarded moves, one transport per instruction, each encodable in 23 bits.
//
// Assembly grammar (one statement per line, or several separated by ';'):
//
//   label:                      # instruction-index label
//   [?bool.N | !bool.N] <src> -> <dst>
//   HALT                        # sugar for  0 -> GCU.halt
//   JUMP <label|index>          # sugar for  <index> -> GCU.pc
//   # comment to end of line
//
// <src> is a decimal/hex literal (immediate, 16 bits, always unguarded) or a
// source socket: RF.0-7, BOOL.0-1, ALU.out, LOGIC.out, NFU.out.
// <dst> is a destination socket: RF.0-7, BOOL.0-1, ALU.in2, ALU.trig.{add,eq,gtu},
// LOGIC.in2, LOGIC.trig.{and,or,xor,shr,shl},
// NFU.trig.{read_neighbour,read_index,write_shared}, GCU.pc, GCU.halt.
// Names are case-insensitive; '->' and the arrow glyph are both accepted.
//
// Binary encoding (bit 22 is the MSB of the 23-bit word):
//   immediate form: bit22=1 | bits21-6 = imm16 | bits5-0 = dest id
//   register form:  bit22=0 | bits21-19 = guard | bits18-13 = source id |
//                   bits12-7 = dest id | bits6-0 = 0

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "meshtta/plane.hpp"

namespace meshtta {

enum class Guard : std::uint8_t {
  Always = 0,
  IfB0 = 1,
  IfB1 = 2,
  IfNotB0 = 3,
  IfNotB1 = 4,
};

enum class AluOp : std::uint8_t { Add, Eq, Gtu };
enum class LogicOp : std::uint8_t { And, Or, Xor, Shr, Shl };
enum class NfuOp : std::uint8_t { ReadNeighbour, ReadIndex, WriteShared };

// Source sockets, numbered exactly as encoded.
enum class Src : std::uint8_t {
  Gpr0 = 0, Gpr1, Gpr2, Gpr3, Gpr4, Gpr5, Gpr6, Gpr7,
  Bool0 = 8, Bool1 = 9,
  AluOut = 10,
  LogicOut = 11,
  NfuOut = 12,
};

// Destination sockets, numbered exactly as encoded. Each trigger destination
// carries its opcode; there are 25 distinct destinations in total.
enum class Dst : std::uint8_t {
  Gpr0 = 0, Gpr1, Gpr2, Gpr3, Gpr4, Gpr5, Gpr6, Gpr7,
  Bool0 = 8, Bool1 = 9,
  AluIn2 = 10,
  AluTrigAdd = 11, AluTrigEq = 12, AluTrigGtu = 13,
  LogicIn2 = 14,
  LogicTrigAnd = 15, LogicTrigOr = 16, LogicTrigXor = 17,
  LogicTrigShr = 18, LogicTrigShl = 19,
  NfuTrigReadNeighbour = 20, NfuTrigReadIndex = 21, NfuTrigWriteShared = 22,
  GcuPc = 23,
  GcuHalt = 24,
};

inline constexpr int kGuardCount = 5;
inline constexpr int kSrcCount = 13;
inline constexpr int kDstCount = 25;
inline constexpr int kInstructionBits = 23;

Src gpr_src(int index);   // index < 8
Dst gpr_dst(int index);   // index < 8
Src bool_src(int index);  // index < 2
Dst bool_dst(int index);  // index < 2

std::string socket_name(Src s);
std::string socket_name(Dst d);

// One guarded transport. Immediate-form moves are always unguarded: the
// encoding has no guard bits in immediate form. Construct through the
// factories so unused fields stay normalized and operator== is exact.
struct Move {
  Guard guard = Guard::Always;
  bool uses_immediate = false;
  Src src = Src::Gpr0;
  std::uint16_t immediate = 0;
  Dst dst = Dst::Gpr0;

  static Move reg(Guard g, Src s, Dst d) {
    Move m;
    m.guard = g;
    m.src = s;
    m.dst = d;
    return m;
  }
  static Move reg(Src s, Dst d) { return reg(Guard::Always, s, d); }
  static Move imm(std::uint16_t value, Dst d) {
    Move m;
    m.uses_immediate = true;
    m.immediate = value;
    m.dst = d;
    return m;
  }

  bool operator==(const Move&) const = default;
};

struct Program {
  std::string name;
  std::vector<Move> moves;
  std::map<std::string, std::size_t> labels;

  std::size_t size() const { return moves.size(); }
};

// Two-pass assembler. Labels may target any index up to and including the
// program end (a jump to the end falls off and halts). Throws ParseError.
Program parse_program(std::string_view text, std::string name = "");

// Bit-exact 23-bit encoding; the returned word always fits in 23 bits.
std::uint32_t encode_instruction(const Move& m);

// Inverse of encode_instruction on its image; throws DecodeError for unused
// socket ids, guard codes outside the table or nonzero reserved bits.
Move decode_instruction(std::uint32_t word);

std::string disassemble_move(const Move& m);

// Canonical text form; reparsing yields the same move sequence. Jump targets
// of immediate pc moves are rendered as generated labels, HALT sugar is kept.
std::string disassemble(const Program& p);

// Binary container: magic "TTAM", version byte 1, 32-bit little-endian
// instruction count, then one 32-bit little-endian word per instruction with
// the 23 significant bits in bits 22-0 and bits 31-23 zero.
std::vector<std::uint8_t> to_binary(const Program& p);
Program from_binary(const std::vector<std::uint8_t>& bytes, std::string name = "");

} // namespace meshtta
