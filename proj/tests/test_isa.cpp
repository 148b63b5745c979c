#include <random>

#include "doctest.h"
#include "meshtta/isa.hpp"

using namespace meshtta;

TEST_CASE("parse: table-style transports") {
  Program p = parse_program("0 -> NFU.trig.read_neighbour");
  REQUIRE(p.moves.size() == 1);
  CHECK(p.moves[0] == Move::imm(0, Dst::NfuTrigReadNeighbour));

  p = parse_program("?bool.0 RF.0 -> RF.1");
  REQUIRE(p.moves.size() == 1);
  CHECK(p.moves[0] == Move::reg(Guard::IfB0, Src::Gpr0, Dst::Gpr1));

  p = parse_program("!bool.1 RF.5 -> NFU.trig.write_shared");
  CHECK(p.moves[0] == Move::reg(Guard::IfNotB1, Src::Gpr5, Dst::NfuTrigWriteShared));
}

TEST_CASE("parse: sugar, labels, separators, comments") {
  Program p = parse_program(
      "# LBP-style loop skeleton\n"
      "mainloop:\n"
      "  0 -> RF.0; 0 -> RF.3\n"
      "  RF.6 -> ALU.in2 ;\n"
      "  JUMP mainloop\n"
      "  HALT\n");
  REQUIRE(p.moves.size() == 5);
  CHECK(p.labels.at("mainloop") == 0);
  CHECK(p.moves[3] == Move::imm(0, Dst::GcuPc));
  CHECK(p.moves[4] == Move::imm(0, Dst::GcuHalt));

  // unicode arrow and hex immediates
  p = parse_program("0xFFFF → LOGIC.in2");
  CHECK(p.moves[0] == Move::imm(0xFFFF, Dst::LogicIn2));

  // label at the end of the program is a valid jump target
  p = parse_program("JUMP done\nHALT\ndone:");
  CHECK(p.moves[0].immediate == 2);
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse_program("RF.0 -> RF.9"), ParseError);
  CHECK_THROWS_AS(parse_program("FOO.1 -> RF.0"), ParseError);
  CHECK_THROWS_AS(parse_program("RF.0 -> BAR"), ParseError);
  CHECK_THROWS_AS(parse_program("70000 -> RF.0"), ParseError);
  CHECK_THROWS_AS(parse_program("JUMP nowhere"), ParseError);
  CHECK_THROWS_AS(parse_program("JUMP 5\nHALT"), ParseError);  // target past the end
  CHECK_THROWS_AS(parse_program("loop: HALT\nloop: HALT"), ParseError);

  // the guarded-immediate diagnostic must point at the two-move idiom
  try {
    parse_program("?bool.0 5 -> RF.1");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find("GPR") != std::string::npos);
    CHECK(msg.find("guarded") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_program("?bool.1 HALT"), ParseError);

  try {
    parse_program("HALT\nRF.0 -> oops\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("encode: fixed bit layout") {
  // immediate 0 to destination id 20 -> 1_0000000000000000_010100
  CHECK(encode_instruction(Move::imm(0, Dst::NfuTrigReadNeighbour)) == 0b1'0000000000000000'010100u);
  // register form: guard in bits 21-19, source in 18-13, dest in 12-7
  CHECK(encode_instruction(Move::reg(Guard::IfB0, Src::Gpr0, Dst::Gpr1)) ==
        ((1u << 19) | (0u << 13) | (1u << 7)));
  CHECK(encode_instruction(Move::reg(Guard::IfNotB1, Src::NfuOut, Dst::GcuHalt)) ==
        ((4u << 19) | (12u << 13) | (24u << 7)));
}

TEST_CASE("decode: malformed words") {
  CHECK_THROWS_AS(decode_instruction((1u << 22) | 31u), DecodeError);       // dest id 31
  CHECK_THROWS_AS(decode_instruction(7u << 19), DecodeError);               // guard code 7
  CHECK_THROWS_AS(decode_instruction(13u << 13), DecodeError);              // source id 13
  CHECK_THROWS_AS(decode_instruction((25u << 7)), DecodeError);             // dest id 25
  CHECK_THROWS_AS(decode_instruction(1u), DecodeError);                     // reserved bits
  CHECK_THROWS_AS(decode_instruction(1u << 23), DecodeError);               // wider than 23 bits
}

TEST_CASE("encode/decode bijection over the full socket space") {
  // register forms: all 5 x 13 x 25 combinations
  for (int g = 0; g < kGuardCount; ++g) {
    for (int s = 0; s < kSrcCount; ++s) {
      for (int d = 0; d < kDstCount; ++d) {
        Move m = Move::reg(static_cast<Guard>(g), static_cast<Src>(s), static_cast<Dst>(d));
        std::uint32_t w = encode_instruction(m);
        CHECK(w < (1u << kInstructionBits));
        CHECK(decode_instruction(w) == m);
      }
    }
  }
  // immediate forms: sampled immediates x all destinations
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> imm(0, 0xFFFF);
  for (int n = 0; n < 1000; ++n) {
    for (int d = 0; d < kDstCount; ++d) {
      Move m = Move::imm(static_cast<std::uint16_t>(imm(rng)), static_cast<Dst>(d));
      std::uint32_t w = encode_instruction(m);
      CHECK(w < (1u << kInstructionBits));
      CHECK(decode_instruction(w) == m);
    }
  }
  // distinct moves encode to distinct words (spot check across forms)
  CHECK(encode_instruction(Move::imm(0, Dst::Gpr0)) !=
        encode_instruction(Move::reg(Src::Gpr0, Dst::Gpr0)));
}

TEST_CASE("disassemble round-trips") {
  const char* text =
      "start:\n"
      "0 -> RF.3\n"
      "7 -> NFU.trig.read_neighbour\n"
      "NFU.out -> ALU.trig.gtu\n"
      "?bool.0 RF.2 -> RF.1\n"
      "ALU.out -> GCU.pc\n"
      "JUMP start\n"
      "HALT\n";
  Program p = parse_program(text);
  Program again = parse_program(disassemble(p));
  CHECK(again.moves == p.moves);

  // idempotent normalization
  CHECK(disassemble(parse_program(disassemble(p))) == disassemble(p));

  CHECK(disassemble(Program{}) == "");
  CHECK(disassemble(parse_program("HALT")) == "HALT\n");
}

TEST_CASE("binary container round-trips and validates") {
  Program p = parse_program("5 -> RF.0\n?bool.1 RF.0 -> ALU.in2\nHALT\n");
  auto bytes = to_binary(p);
  REQUIRE(bytes.size() == 9 + 4 * p.moves.size());
  CHECK(bytes[0] == 'T');
  CHECK(bytes[4] == 1);
  Program q = from_binary(bytes);
  CHECK(q.moves == p.moves);

  auto corrupt = bytes;
  corrupt[3] = 'X';
  CHECK_THROWS_AS(from_binary(corrupt), DecodeError);
  corrupt = bytes;
  corrupt[12] = 0x80;  // bits 31-23 must stay zero
  CHECK_THROWS_AS(from_binary(corrupt), DecodeError);
  corrupt = bytes;
  corrupt.pop_back();
  CHECK_THROWS_AS(from_binary(corrupt), DecodeError);

  CHECK(from_binary(to_binary(Program{})).moves.empty());
}
