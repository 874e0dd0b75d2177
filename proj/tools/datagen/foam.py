BANNER = r"""/*--------------------------------*- C++ -*----------------------------------*\
  =========                 |
  \\      /  F ield         | OpenFOAM: The Open Source CFD Toolbox
   \\    /   O peration     | Website:  https://openfoam.org
    \\  /    A nd           | Version:  10
     \\/     M anipulation  |
\*---------------------------------------------------------------------------*/
"""
SEP = "// * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * //\n"
END = "// ************************************************************************* //\n"

CLASSES = {
    "U": "volVectorField", "U.orig": "volVectorField",
    "p": "volScalarField", "p_rgh": "volScalarField", "k": "volScalarField",
    "epsilon": "volScalarField", "omega": "volScalarField", "nut": "volScalarField",
    "nuTilda": "volScalarField", "s": "volScalarField", "T": "volScalarField",
    "alphat": "volScalarField", "CH4": "volScalarField", "O2": "volScalarField",
    "N2": "volScalarField", "Ydefault": "volScalarField", "sigma": "volSymmTensorField",
    "g": "uniformDimensionedVectorField", "pRef": "uniformDimensionedScalarField",
}


def foamfile(folder, name, body):
    cls = CLASSES.get(name, "dictionary") if folder.startswith("0") or name in ("g", "pRef") else "dictionary"
    obj = name.split(".orig")[0] if name.endswith(".orig") else name
    loc = f'    location    "{folder}";\n' if folder != "system" or True else ""
    head = (BANNER + "FoamFile\n{\n    format      ascii;\n    class       " + cls + ";\n"
            + loc + "    object      " + obj + ";\n}\n" + SEP + "\n")
    return head + body.strip("\n") + "\n\n" + END


ALLRUN_HEAD = """#!/bin/sh
cd ${0%/*} || exit 1    # Run from this directory

# Source tutorial run functions
. $WM_PROJECT_DIR/bin/tools/RunFunctions

application=$(getApplication)

"""
ALLRUN_TAIL = "\n#------------------------------------------------------------------------------\n"


def allrun(lines):
    return ALLRUN_HEAD + "\n".join(lines) + "\n" + ALLRUN_TAIL
