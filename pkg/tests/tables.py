"""Reference values transcribed for the tests."""

# Club sequences for d = 3, n = 1..4, with "c" for the club symbol.
CLUB_SEQUENCES_D3 = {
    1: "c",
    2: "0c 1c 2c cc",
    3: "00c 01c 02c 0cc 10c 11c 12c 1cc 20c 21c 22c 2cc ccc",
    4: (
        "000c 001c 002c 00cc 010c 011c 012c 01cc 020c 021c 022c 02cc 0ccc "
        "100c 101c 102c 10cc 110c 111c 112c 11cc 120c 121c 122c 12cc 1ccc "
        "200c 201c 202c 20cc 210c 211c 212c 21cc 220c 221c 222c 22cc 2ccc cccc"
    ),
}

# Total control boxes, keyed by d then n, as published.
CONTROL_TABLE = {
    2: {2: 5, 3: 40, 4: 220, 5: 1040, 6: 4560, 7: 19200, 8: 79040, 9: 321280,
        10: 1296640, 11: 5212160, 12: 20904960},
    3: {2: 17, 3: 285, 4: 3240, 5: 32130, 6: 301239, 7: 2757807, 8: 24994494,
        9: 225584676, 10: 2032525629, 11: 1120813409},
    4: {2: 39, 3: 1140, 4: 22176, 5: 379776, 6: 6220032, 7: 100279728, 8: 1608794112},
    5: {2: 74, 3: 3370, 4: 100000, 5: 2631500, 6: 66768750, 7: 1676043750},
    6: {2: 125, 3: 8820, 4: 345060, 5: 12931920, 6: 470221200},
    7: {2: 195, 3: 17535, 4: 987840, 5: 49999110},
    8: {2: 287, 3: 33880, 4: 2464000, 5: 161960960},
    9: {2: 404, 3: 60660, 4: 5528736, 5: 457946136},
    10: {2: 549, 3: 102240, 4: 11407500},
}

# The published (3, 11) entry is the exact count reduced mod 2**32.
EXACT_3_11 = 18300682593
