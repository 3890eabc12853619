#!/usr/bin/env python3
"""Independent reference for the key stream, Fisher-Yates permutation,
dihedral codes and the 32x32 encryption trace. Values printed here are
frozen into tests/test_etc_crypto.cpp."""

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + GAMMA) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)


def bounded(rng, n):
    limit = ((1 << 64) // n) * n
    while True:
        x = rng.next()
        if x < limit:
            return x % n


def permutation(k1, b):
    rng = SplitMix64(k1)
    m = list(range(b))
    for i in range(b - 1, 0, -1):
        j = bounded(rng, i + 1)
        m[i], m[j] = m[j], m[i]
    return m


def codes(k2, b):
    rng = SplitMix64(k2)
    return [bounded(rng, 8) for _ in range(b)]


def rot_cw(block):
    n = len(block)
    return [[block[n - 1 - c][r] for c in range(n)] for r in range(n)]


def dihedral(block, code):
    for _ in range(code % 4):
        block = rot_cw(block)
    if code >= 4:
        block = [list(reversed(row)) for row in block]
    return block


def encrypt(img, w, h, k1, k2):
    cols, rows = w // 16, h // 16
    blocks = []
    for br in range(rows):
        for bc in range(cols):
            blocks.append([[img[br * 16 + y][bc * 16 + x] for x in range(16)] for y in range(16)])
    perm = permutation(k1, len(blocks))
    cs = codes(k2, len(blocks))
    out_blocks = [dihedral(blocks[perm[p]], cs[p]) for p in range(len(blocks))]
    out = [[None] * (cols * 16) for _ in range(rows * 16)]
    for p, blk in enumerate(out_blocks):
        br, bc = divmod(p, cols)
        for y in range(16):
            for x in range(16):
                out[br * 16 + y][bc * 16 + x] = blk[y][x]
    return out


if __name__ == "__main__":
    r = SplitMix64(0)
    print("seed0 first outputs:", [hex(r.next()) for _ in range(3)])
    print("seed1 first output:", hex(SplitMix64(1).next()))
    r = SplitMix64(42)
    print("seed42 bounded(4) x5:", [bounded(r, 4) for _ in range(5)])
    print("perm k1=0 B=4:", permutation(0, 4))
    print("perm k1=7 B=10:", permutation(7, 10))
    print("codes k2=0 B=3:", codes(0, 3))
    print("codes k2=5 B=8:", codes(5, 8))
    # 32x32 image: pixel (x, y) -> (x*8, y*8, (x + y) % 256); k1 = k2 = 0.
    img = [[(x * 8 % 256, y * 8 % 256, (x + 2 * y) % 256) for x in range(32)] for y in range(32)]
    enc = encrypt(img, 32, 32, 0, 0)
    print("enc32 k=0 perm/codes:", permutation(0, 4), codes(0, 4))
    for (x, y) in [(0, 0), (15, 0), (16, 0), (31, 31), (5, 20)]:
        print(f"enc32[{x},{y}] =", enc[y][x])
    # master-seed key derivation: key i = outputs 2i and 2i+1 of stream(master)
    r = SplitMix64(1234)
    outs = [r.next() for _ in range(6)]
    print("master 1234 key2:", hex(outs[4]), hex(outs[5]))
