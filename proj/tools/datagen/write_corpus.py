import os, sys
from foam import foamfile
from cases import TUTORIALS

root = sys.argv[1]
for rel, (files, allrun_text) in TUTORIALS.items():
    case = os.path.join(root, rel)
    for (folder, name), body in files.items():
        d = os.path.join(case, folder)
        os.makedirs(d, exist_ok=True)
        with open(os.path.join(d, name), "w") as f:
            f.write(foamfile(folder, name, body))
    p = os.path.join(case, "Allrun")
    with open(p, "w") as f:
        f.write(allrun_text)
    os.chmod(p, 0o755)
print("ok")
