"""Reference Philox4x64-10 in pure Python; prints known-answer vectors."""

M0 = 0xD2E7470EE14C6C93
M1 = 0xCA5A826395121157
W0 = 0x9E3779B97F4A7C15
W1 = 0xBB67AE8584CAA73B
MASK = (1 << 64) - 1


def philox4x64(ctr, key, rounds=10):
    c = list(ctr)
    k = list(key)
    for r in range(rounds):
        if r:
            k = [(k[0] + W0) & MASK, (k[1] + W1) & MASK]
        p0 = M0 * c[0]
        p1 = M1 * c[2]
        c = [(p1 >> 64) ^ c[1] ^ k[0], p1 & MASK, (p0 >> 64) ^ c[3] ^ k[1], p0 & MASK]
    return c


CASES = [
    ([0, 0, 0, 0], [0, 0]),
    ([MASK] * 4, [MASK] * 2),
    ([0x243F6A8885A308D3, 0x13198A2E03707344, 0xA4093822299F31D0, 0x082EFA98EC4E6C89],
     [0x452821E638D01377, 0xBE5466CF34E90C6C]),
]

if __name__ == "__main__":
    for ctr, key in CASES:
        print(" ".join(f"{w:016x}" for w in philox4x64(ctr, key)))
