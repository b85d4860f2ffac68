"""Independent straight-line oracles, written before the optimized code paths.

Everything here uses plain Python loops and the math module so the
implementations under test share no code with their checkers.
"""

import math


def kde_brute_force(points, query, h):
    """Direct double-loop Gaussian KDE in 3-D."""
    n = len(points)
    total = 0.0
    for p in points:
        d2 = (query[0] - p[0]) ** 2 + (query[1] - p[1]) ** 2 + (query[2] - p[2]) ** 2
        total += math.exp(-d2 / (2.0 * h * h))
    return total / (n * h ** 3 * (2.0 * math.pi) ** 1.5)


def scott_bandwidth_oracle(points, floor_fraction, bbox_diagonal):
    """Scott's rule in 3-D: n^(-1/7) * mean per-axis sample std, floored."""
    n = len(points)
    floor = floor_fraction * (bbox_diagonal if bbox_diagonal > 0 else 1.0)
    if n < 2:
        return floor
    sigma_sum = 0.0
    for axis in range(3):
        mean = sum(p[axis] for p in points) / n
        var = sum((p[axis] - mean) ** 2 for p in points) / (n - 1)
        sigma_sum += math.sqrt(var)
    return max(n ** (-1.0 / 7.0) * (sigma_sum / 3.0), floor)


def convert_edit_oracle(vertices, weight_rows, edited_ids, target_label,
                        idw_power, floor_fraction):
    """Straight-line evaluation of one edit command.

    vertices: list of (x, y, z); weight_rows: list of K-float lists.
    Returns the full weight matrix after the edit as lists.
    """
    V = len(vertices)
    K = len(weight_rows[0])
    edited = set(edited_ids)

    # argmax with lowest-index tie-break, on pre-edit rows
    def argmax(row):
        best, best_val = 0, row[0]
        for i in range(1, len(row)):
            if row[i] > best_val:
                best, best_val = i, row[i]
        return best

    members = [u for u in range(V)
               if u not in edited and argmax(weight_rows[u]) == target_label]

    # bounding-box diagonal of the whole mesh
    mins = [min(v[a] for v in vertices) for a in range(3)]
    maxs = [max(v[a] for v in vertices) for a in range(3)]
    diag = math.sqrt(sum((maxs[a] - mins[a]) ** 2 for a in range(3)))

    out = [list(row) for row in weight_rows]

    if members:
        pts = [vertices[u] for u in members]
        h = scott_bandwidth_oracle(pts, floor_fraction, diag)
        eta = [kde_brute_force(pts, q, h) for q in pts]
        for v in sorted(edited):
            x = vertices[v]
            dists = [math.dist(x, p) for p in pts]
            nearest = min(range(len(pts)), key=lambda i: dists[i])
            if dists[nearest] < 1e-12:
                out[v] = list(weight_rows[members[nearest]])
                continue
            blended = [0.0] * K
            for i, u in enumerate(members):
                alpha = (1.0 / dists[i] ** idw_power) * eta[i]
                for k in range(K):
                    blended[k] += alpha * weight_rows[u][k]
            total = sum(blended)
            out[v] = [b / total for b in blended]
    else:
        for v in sorted(edited):
            row = list(weight_rows[v])
            row[target_label] = 0.0
            total = sum(row)
            out[v] = [r / total for r in row]
    return out


def fk_matrix_stack_oracle(parents, offsets, rotations, translations):
    """Brute-force FK: for each joint, multiply the full local-matrix chain
    from the root down. rotations are 3x3 row-major lists."""

    def mat4(rot, trans):
        return [
            [rot[0][0], rot[0][1], rot[0][2], trans[0]],
            [rot[1][0], rot[1][1], rot[1][2], trans[1]],
            [rot[2][0], rot[2][1], rot[2][2], trans[2]],
            [0.0, 0.0, 0.0, 1.0],
        ]

    def matmul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)]
                for i in range(4)]

    worlds = []
    for j in range(len(parents)):
        chain = []
        node = j
        while node is not None:
            t = [offsets[node][a] + translations[node][a] for a in range(3)]
            chain.append(mat4(rotations[node], t))
            node = parents[node]
        m = [[1.0 if i == k else 0.0 for k in range(4)] for i in range(4)]
        for local in reversed(chain):
            m = matmul(m, local)
        worlds.append(m)
    return worlds


def quat_to_matrix_oracle(q):
    w, x, y, z = q
    return [
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ]
