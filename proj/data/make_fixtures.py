# Copyright 2026 The headpose Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the JSON/CSV fixtures in this directory with numpy and scipy."""

import json
import os

import numpy as np
from scipy.spatial.transform import Rotation

HERE = os.path.dirname(os.path.abspath(__file__))


def dump(name, obj):
    with open(os.path.join(HERE, name), "w") as f:
        json.dump(obj, f, indent=2)
        f.write("\n")


def rx_left(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[1, 0, 0], [0, c, s], [0, -s, c]])


def ry_left(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, 0, -s], [0, 1, 0], [s, 0, c]])


def rz_left(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, s, 0], [-s, c, 0], [0, 0, 1]])


def w300lp(p, y, r):
    return rx_left(p) @ ry_left(y) @ rz_left(r)


LABELLED = [("left", 6.208, 5.876, -1.694),
            ("middle", -17.325, -49.589, 11.423),
            ("right", -7.601, -54.009, 4.450)]

with open(os.path.join(HERE, "labelled_poses.csv"), "w") as f:
    f.write("image_id,pitch_deg,yaw_deg,roll_deg,convention\n")
    for name, p, y, r in LABELLED:
        f.write(f"{name}.jpg,{p},{y},{r},W300LP\n")

dump("labelled_matrices.json", {"annotations": [
    {"image_id": f"{name}.jpg", "convention": "W300LP",
     "rotation": w300lp(*np.deg2rad([p, y, r])).reshape(-1).tolist()}
    for name, p, y, r in LABELLED]})

HELEN = (-16.090911401458296, -89.9985818251308, -6.854511900533989)
with open(os.path.join(HERE, "helen_gimbal.csv"), "w") as f:
    f.write("image_id,pitch_deg,yaw_deg,roll_deg,convention\n")
    f.write("HELEN_2375918801_1_14.jpg,%r,%r,%r,W300LP\n" % HELEN)

dump("3ddfa_pattern.json", {"pattern": [
    ["cos(r)*cos(y)", "free", "free"],
    ["sin(r)*cos(y)", "free", "free"],
    ["sin(y)", "cos(y)*sin(p)", "cos(y)*cos(p)"]]})

dump("all_free_pattern.json", {"pattern": [["free"] * 3] * 3})

# SciPy's intrinsic "ZYX" with angles (yaw, pitch, roll) is the WIKI_ZYX system.
rng = np.random.default_rng(7)
samples = []
for _ in range(8):
    p, y, r = rng.uniform(-1.4, 1.4, size=3)
    m = Rotation.from_euler("ZYX", [y, p, r]).as_matrix()
    samples.append({"euler_deg": {"pitch": float(np.rad2deg(p)), "yaw": float(np.rad2deg(y)),
                                  "roll": float(np.rad2deg(r))},
                    "rotation": m.reshape(-1).tolist()})
dump("wiki_zyx_samples.json", {"samples": samples})

# Alignment fixture: the 58-point head in native units, observed in the
# OpenPose frame (turned 180 degrees about X) after a planted W300LP pose.
HEAD = np.array([
    [-7.308957, 0.913869, 0.000000], [-6.775290, -0.730814, -0.012799],
    [-5.665918, -3.286078, 1.022951], [-5.011779, -4.876396, 1.047961],
    [-4.056931, -5.947019, 1.636229], [-1.833492, -7.056977, 4.061275],
    [0.000000, -7.415691, 4.070434], [1.833492, -7.056977, 4.061275],
    [4.056931, -5.947019, 1.636229], [5.011779, -4.876396, 1.047961],
    [5.665918, -3.286078, 1.022951],
    [6.775290, -0.730814, -0.012799], [7.308957, 0.913869, 0.000000],
    [5.311432, 5.485328, 3.987654], [4.461908, 6.189018, 5.594410],
    [3.550622, 6.185143, 5.712299], [2.542231, 5.862829, 4.687939],
    [1.789930, 5.393625, 4.413414], [2.693583, 5.018237, 5.072837],
    [3.530191, 4.981603, 4.937805], [4.490323, 5.186498, 4.694397],
    [-5.311432, 5.485328, 3.987654], [-4.461908, 6.189018, 5.594410],
    [-3.550622, 6.185143, 5.712299], [-2.542231, 5.862829, 4.687939],
    [-1.789930, 5.393625, 4.413414], [-2.693583, 5.018237, 5.072837],
    [-3.530191, 4.981603, 4.937805], [-4.490323, 5.186498, 4.694397],
    [1.330353, 7.122144, 6.903745], [2.533424, 7.878085, 7.451034],
    [4.861131, 7.878672, 6.601275], [6.137002, 7.271266, 5.200823],
    [6.825897, 6.760612, 4.402142], [-1.330353, 7.122144, 6.903745],
    [-2.533424, 7.878085, 7.451034], [-4.861131, 7.878672, 6.601275],
    [-6.137002, 7.271266, 5.200823], [-6.825897, 6.760612, 4.402142],
    [-2.774015, -2.080775, 5.048531], [-0.509714, -1.571179, 6.566167],
    [0.000000, -1.646444, 6.704956], [0.509714, -1.571179, 6.566167],
    [2.774015, -2.080775, 5.048531], [0.589441, -2.958597, 6.109526],
    [0.000000, -3.116408, 6.097667], [-0.589441, -2.958597, 6.109526],
    [-0.981972, 4.554081, 6.301271], [-0.973987, 1.916389, 7.654050],
    [-2.005628, 1.409845, 6.165652], [-1.930245, 0.424351, 5.914376],
    [-0.746313, 0.348381, 6.263227], [0.000000, 0.000000, 6.763430],
    [0.746313, 0.348381, 6.263227], [1.930245, 0.424351, 5.914376],
    [2.005628, 1.409845, 6.165652], [0.973987, 1.916389, 7.654050],
    [0.981972, 4.554081, 6.301271]])
PLANTED_DEG = (12.0, -35.0, 8.0)
R0 = w300lp(*np.deg2rad(PLANTED_DEG))
E = np.diag([1.0, -1.0, -1.0])
observed = (E @ R0 @ HEAD.T).T * 1.5 + np.array([10.0, -4.0, 120.0])
dump("align_model.json", {"points": HEAD.tolist()})
dump("align_observed.json", {"points": observed.tolist()})
dump("align_camera.json", {"R": np.eye(3).reshape(-1).tolist(), "t": [0.0, 0.0, 0.0]})
dump("align_planted.json", {"euler_deg": dict(zip(("pitch", "yaw", "roll"), PLANTED_DEG)),
                            "rotation": R0.reshape(-1).tolist(), "scale": 1.5,
                            "translation": [10.0, -4.0, 120.0]})
