"""Smoke tests for the python module (run by ctest with PYTHONPATH set)."""

import random
import sys
import tempfile
import os

import meshtta as mt


def check(cond, what):
    if not cond:
        print("FAIL:", what)
        sys.exit(1)
    print("ok:", what)


def random_image(w, h, rng, maxval=0xFFFF):
    return mt.ImagePlane.from_list(w, h, [rng.randint(0, maxval) for _ in range(w * h)])


def main():
    rng = random.Random(7)

    # assembler round trip
    prog = mt.assemble("0 -> NFU.trig.read_neighbour\nNFU.out -> RF.3\nHALT", "probe")
    check(len(prog) == 3, "assemble parses three moves")
    text = mt.disassemble(prog)
    check(len(mt.assemble(text)) == 3, "disassembly reparses")
    blob = mt.to_binary(prog)
    check(blob[:4] == b"TTAM", "binary container magic")
    check(len(mt.from_binary(blob)) == 3, "binary round trip")
    try:
        mt.assemble("?bool.0 5 -> RF.1")
        check(False, "guarded immediate must be rejected")
    except RuntimeError as e:
        check("GPR" in str(e), "guarded-immediate diagnostic suggests the idiom")

    # kernels against their scalar references
    img = random_image(16, 16, rng)
    lbp = mt.lbp3x3()
    check(lbp.bool_registers_used == 1, "lbp uses exactly one boolean register")
    for boundary in ("zero", "clamp", "wrap"):
        plane, stats = mt.run_program(lbp.program, img, boundary=boundary)
        check(plane == mt.lbp_ref(img, boundary), f"lbp matches reference ({boundary})")
        check(stats["cycles"] == lbp.predicted_cycles, "lbp cycle count is as predicted")

    weights = [rng.randint(-128, 127) for _ in range(9)]
    if not any(weights):
        weights[4] = 1
    conv = mt.conv3x3(weights, post_shift=2)
    plane, _ = mt.run_program(conv.program, img)
    check(plane == mt.conv3x3_ref(img, weights, 2), "conv3x3 matches reference")

    pool = mt.maxpool(3, 2)
    plane, _ = mt.run_program(pool.program, img)
    check(plane == mt.maxpool_ref(img, 3, 2), "maxpool matches reference")

    # wave load cost and fovea sweep
    _, stats = mt.run_program(lbp.program, img, load="wave")
    check(stats["load_cycles"] == 16, "wave load costs one cycle per column")

    big = random_image(64, 64, rng)
    plane, stats = mt.run_fovea(lbp.program, big, 32, 32, 1)
    check(stats["windows"] == (3, 3), "64x64 over 32x32 with halo 1 takes 9 windows")
    ref = mt.lbp_ref(big)
    interior_ok = all(
        plane.at(x, y) == ref.at(x, y) for y in range(1, 63) for x in range(1, 63)
    )
    check(interior_ok, "fovea interior matches the whole-image reference")

    # energy and area model
    e = mt.program_energy_j("0.6V125C", 10e6, 74, 1)
    check(abs(e - 0.13616e-9) < 1e-13, "near-threshold LBP energy")
    check(abs(mt.fpga_program_energy_j(74) - 1.48e-9) < 1e-12, "fpga LBP energy")
    check(abs(mt.area_mm2(128, 128) - 49.5616) < 1e-9, "area extrapolation")
    report = mt.fpga_report(11, 10)
    check(report["dynamic_mw"] == 113.79, "fpga dynamic power row")
    check(not report["total_matches_reported"], "fpga printed total flagged")
    check(mt.asic_corner_names() == ["0.8V25C", "0.6V125C", "0.8V125C"], "corner names")

    # pgm i/o
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "img.pgm")
        mt.write_pgm(img, path)
        check(mt.read_pgm(path) == img, "pgm round trip")

    print("python smoke tests passed")


if __name__ == "__main__":
    main()
