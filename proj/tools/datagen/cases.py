from foam import foamfile, allrun


def control_dict(app, end, dt, wi, start="startTime"):
    return f"""application     {app};

startFrom       {start};

startTime       0;

stopAt          endTime;

endTime         {end};

deltaT          {dt};

writeControl    timeStep;

writeInterval   {wi};

purgeWrite      0;

writeFormat     ascii;

writePrecision  6;

timeFormat      general;

runTimeModifiable true;
"""


def fv_schemes(div="Gauss linear"):
    return f"""ddtSchemes
{{
    default         Euler;
}}

gradSchemes
{{
    default         Gauss linear;
}}

divSchemes
{{
    default         none;
    div(phi,U)      {div};
}}

laplacianSchemes
{{
    default         Gauss linear corrected;
}}

interpolationSchemes
{{
    default         linear;
}}

snGradSchemes
{{
    default         corrected;
}}
"""


def fv_solution(extra=""):
    return f"""solvers
{{
    p
    {{
        solver          PCG;
        preconditioner  DIC;
        tolerance       1e-06;
        relTol          0.05;
    }}

    pFinal
    {{
        $p;
        relTol          0;
    }}

    "(U|k|epsilon|T)"
    {{
        solver          smoothSolver;
        smoother        symGaussSeidel;
        tolerance       1e-05;
        relTol          0;
    }}
}}

PISO
{{
    nCorrectors     2;
    nNonOrthogonalCorrectors 0;
}}
{extra}"""


def block_mesh(cells, patches, verts=None):
    verts = verts or ["(0 0 0)", "(1 0 0)", "(1 1 0)", "(0 1 0)", "(0 0 0.1)", "(1 0 0.1)", "(1 1 0.1)", "(0 1 0.1)"]
    out = "convertToMeters 1;\n\nvertices\n(\n" + "".join(f"    {v}\n" for v in verts) + ");\n\n"
    out += f"blocks\n(\n    hex (0 1 2 3 4 5 6 7) ({cells}) simpleGrading (1 1 1)\n);\n\nboundary\n(\n"
    for name, typ, faces, extra in patches:
        out += f"    {name}\n    {{\n        type {typ};\n"
        for e in extra:
            out += f"        {e}\n"
        out += "        faces\n        (\n" + "".join(f"            {f}\n" for f in faces) + "        );\n    }\n"
    out += ");\n"
    return out


def field(dims, internal, boundary):
    out = f"dimensions      {dims};\n\ninternalField   {internal};\n\nboundaryField\n{{\n"
    for name, entries in boundary:
        out += f"    {name}\n    {{\n" + "".join(f"        {e}\n" for e in entries) + "    }\n"
    out += "}\n"
    return out


VEL = "[0 1 -1 0 0 0 0]"
PRES = "[0 2 -2 0 0 0 0]"
KDIM = "[0 2 -2 0 0 0 0]"
EPSDIM = "[0 2 -3 0 0 0 0]"
NUDIM = "[0 2 -1 0 0 0 0]"
TDIM = "[0 0 0 1 0 0 0]"


def zero_grad(names):
    return [(n, ["type            zeroGradient;"]) for n in names]


def fixed(names, value):
    return [(n, ["type            fixedValue;", f"value           {value};"]) for n in names]


def empty_fb():
    return [("frontAndBack", ["type            empty;"])]


CYCLIC_FACES = {
    "x": (["(0 3 7 4)"], ["(1 5 6 2)"]),
    "y": (["(0 4 5 1)"], ["(3 2 6 7)"]),
    "z": (["(0 1 2 3)"], ["(4 7 6 5)"]),
}


def hit_block_mesh(n, with_neighbour=True):
    patches = []
    for ax in "xyz":
        f0, f1 = CYCLIC_FACES[ax]
        h0, h1 = f"periodic_{ax}_half0", f"periodic_{ax}_half1"
        patches.append((h0, "cyclic", f0, [f"neighbourPatch {h1};"] if with_neighbour else []))
        patches.append((h1, "cyclic", f1, [f"neighbourPatch {h0};"] if with_neighbour else []))
    verts = ["(0 0 0)", "(1 0 0)", "(1 1 0)", "(0 1 0)", "(0 0 1)", "(1 0 1)", "(1 1 1)", "(0 1 1)"]
    return block_mesh(f"{n} {n} {n}", patches, verts).replace("convertToMeters 1;", "convertToMeters 6.28319;")


def hit_cyclic_boundary(with_periodic=True):
    if with_periodic:
        return [(f"periodic_{ax}_half{h}", ["type            cyclic;"]) for ax in "xyz" for h in "01"]
    return [("walls", ["type            noSlip;"])]


def hit_files(n, neighbour=True, periodic=True, fv_constraints=False):
    files = {
        ("system", "controlDict"): control_dict("dnsFoam", 10, 0.025, 40),
        ("system", "fvSchemes"): fv_schemes(),
        ("system", "fvSolution"): fv_solution(),
        ("system", "blockMeshDict"): hit_block_mesh(n, neighbour),
        ("system", "decomposeParDict"): "numberOfSubdomains 4;\n\nmethod          simple;\n\nsimpleCoeffs\n{\n    n               (2 2 1);\n}\n",
        ("constant", "physicalProperties"): "viscosityModel  constant;\n\nnu              [0 2 -1 0 0 0 0] 0.025;\n",
        ("constant", "momentumTransport"): "simulationType  laminar;\n",
        ("constant", "boxTurbDict"): "Ea              10;\n\nk0              5;\n",
        ("0", "U.orig"): field(VEL, "uniform (0 0 0)", hit_cyclic_boundary(periodic)),
        ("0", "p"): field(PRES, "uniform 0", hit_cyclic_boundary(True)),
    }
    if fv_constraints:
        files[("system", "fvConstraints")] = "limitp\n{\n    type            limitPressure;\n    minFactor       0.5;\n    maxFactor       2;\n}\n"
    return files


def hit_allrun():
    return allrun(["runApplication blockMesh", "cp 0/U.orig 0/U", "runApplication boxTurb", "runApplication $application"])


def simple_allrun():
    return allrun(["runApplication blockMesh", "runApplication $application"])


def cavity_walls():
    return ["movingWall", "fixedWalls"]


def cavity_mesh(cells):
    return block_mesh(cells, [
        ("movingWall", "wall", ["(3 7 6 2)"], []),
        ("fixedWalls", "wall", ["(0 4 7 3)", "(2 6 5 1)", "(1 5 4 0)"], []),
        ("frontAndBack", "empty", ["(0 3 2 1)", "(4 5 6 7)"], []),
    ])


def pitz_mesh():
    return block_mesh("18 30 1", [
        ("inlet", "patch", ["(0 4 7 3)"], []),
        ("outlet", "patch", ["(1 2 6 5)"], []),
        ("upperWall", "wall", ["(3 7 6 2)"], []),
        ("lowerWall", "wall", ["(0 1 5 4)"], []),
        ("frontAndBack", "empty", ["(0 3 2 1)", "(4 5 6 7)"], []),
    ])


PITZ_PATCHES = ["inlet", "outlet", "upperWall", "lowerWall"]


def pitz_files(inlet):
    return {
        ("system", "controlDict"): control_dict("pisoFoam", 0.1, 1e-05, 100),
        ("system", "fvSchemes"): fv_schemes(),
        ("system", "fvSolution"): fv_solution(),
        ("system", "blockMeshDict"): pitz_mesh(),
        ("constant", "physicalProperties"): "viscosityModel  constant;\n\nnu              [0 2 -1 0 0 0 0] 1e-05;\n",
        ("constant", "momentumTransport"): "simulationType  LES;\n\nLES\n{\n    model           dynamicKEqn;\n    turbulence      on;\n    printCoeffs     on;\n    delta           cubeRootVol;\n}\n",
        ("0", "U"): field(VEL, "uniform (0 0 0)", [("inlet", ["type            fixedValue;", f"value           uniform ({inlet} 0 0);"]), ("outlet", ["type            zeroGradient;"]), ("upperWall", ["type            noSlip;"]), ("lowerWall", ["type            noSlip;"])] + empty_fb()),
        ("0", "p"): field(PRES, "uniform 0", zero_grad(["inlet", "upperWall", "lowerWall"]) + fixed(["outlet"], "uniform 0") + empty_fb()),
        ("0", "k"): field(KDIM, "uniform 0", fixed(["inlet", "upperWall", "lowerWall"], "uniform 2e-05") + zero_grad(["outlet"]) + empty_fb()),
        ("0", "nut"): field(NUDIM, "uniform 0", zero_grad(["inlet", "outlet"]) + fixed(["upperWall", "lowerWall"], "uniform 0") + empty_fb()),
        ("0", "nuTilda"): field(NUDIM, "uniform 0", fixed(["inlet"], "uniform 0") + zero_grad(["outlet", "upperWall", "lowerWall"]) + empty_fb()),
        ("0", "s"): field("[0 0 0 0 0 0 0]", "uniform 0", fixed(["inlet"], "uniform 1") + zero_grad(["outlet", "upperWall", "lowerWall"]) + empty_fb()),
    }


def cavity_ras_files(cells, model):
    walls = cavity_walls()
    return {
        ("system", "controlDict"): control_dict("pisoFoam", 10, 0.005, 100),
        ("system", "fvSchemes"): fv_schemes("Gauss limitedLinearV 1"),
        ("system", "fvSolution"): fv_solution(),
        ("system", "blockMeshDict"): cavity_mesh(cells),
        ("constant", "physicalProperties"): "viscosityModel  constant;\n\nnu              [0 2 -1 0 0 0 0] 1e-05;\n",
        ("constant", "momentumTransport"): f"simulationType  RAS;\n\nRAS\n{{\n    model           {model};\n    turbulence      on;\n    printCoeffs     on;\n}}\n",
        ("0", "U"): field(VEL, "uniform (0 0 0)", [("movingWall", ["type            fixedValue;", "value           uniform (1 0 0);"]), ("fixedWalls", ["type            noSlip;"])] + empty_fb()),
        ("0", "p"): field(PRES, "uniform 0", zero_grad(walls) + empty_fb()),
        ("0", "k"): field(KDIM, "uniform 0.00325", [(w, ["type            kqRWallFunction;", "value           uniform 0.00325;"]) for w in walls] + empty_fb()),
        ("0", "epsilon"): field(EPSDIM, "uniform 0.000765", [(w, ["type            epsilonWallFunction;", "value           uniform 0.000765;"]) for w in walls] + empty_fb()),
        ("0", "nut"): field(NUDIM, "uniform 0", [(w, ["type            nutkWallFunction;", "value           uniform 0;"]) for w in walls] + empty_fb()),
        ("0", "nuTilda"): field(NUDIM, "uniform 0", zero_grad(walls) + empty_fb()),
    }


def ico_cavity_files(speed):
    walls = cavity_walls()
    return {
        ("system", "controlDict"): control_dict("icoFoam", 0.5, 0.005, 20),
        ("system", "fvSchemes"): fv_schemes(),
        ("system", "fvSolution"): fv_solution(),
        ("system", "blockMeshDict"): cavity_mesh("20 20 1"),
        ("constant", "physicalProperties"): "viscosityModel  constant;\n\nnu              [0 2 -1 0 0 0 0] 0.01;\n",
        ("0", "U"): field(VEL, "uniform (0 0 0)", [("movingWall", ["type            fixedValue;", f"value           uniform ({speed} 0 0);"]), ("fixedWalls", ["type            noSlip;"])] + empty_fb()),
        ("0", "p"): field(PRES, "uniform 0", zero_grad(walls) + empty_fb()),
    }


def square_bend_files(end, dt, wi):
    walls = ["inlet", "outlet", "walls"]
    return {
        ("system", "controlDict"): control_dict("rhoSimpleFoam", end, dt, wi),
        ("system", "fvSchemes"): fv_schemes("bounded Gauss upwind"),
        ("system", "fvSolution"): fv_solution("\nSIMPLE\n{\n    nNonOrthogonalCorrectors 0;\n    transonic       no;\n    consistent      no;\n}\n"),
        ("system", "blockMeshDict"): block_mesh("20 20 10", [("inlet", "patch", ["(0 4 7 3)"], []), ("outlet", "patch", ["(1 2 6 5)"], []), ("walls", "wall", ["(0 1 5 4)", "(3 7 6 2)", "(0 3 2 1)", "(4 5 6 7)"], [])]),
        ("constant", "physicalProperties"): "thermoType\n{\n    type            heRhoThermo;\n    mixture         pureMixture;\n    properties      liquid;\n    energy          sensibleInternalEnergy;\n}\n\nmixture\n{\n    H2O;\n}\n",
        ("constant", "momentumTransport"): "simulationType  RAS;\n\nRAS\n{\n    model           kEpsilon;\n    turbulence      on;\n    printCoeffs     on;\n}\n",
        ("0", "U"): field(VEL, "uniform (0 0 0)", [("inlet", ["type            flowRateInletVelocity;", "massFlowRate    constant 5;", "value           uniform (0 0 0);"]), ("outlet", ["type            zeroGradient;"]), ("walls", ["type            noSlip;"])]),
        ("0", "p"): field("[1 -1 -2 0 0 0 0]", "uniform 1e5", zero_grad(["inlet", "walls"]) + fixed(["outlet"], "uniform 1e5")),
        ("0", "T"): field(TDIM, "uniform 300", fixed(["inlet"], "uniform 300") + zero_grad(["outlet"]) + fixed(["walls"], "uniform 350")),
        ("0", "k"): field(KDIM, "uniform 1", fixed(["inlet"], "uniform 1") + zero_grad(["outlet"]) + [("walls", ["type            kqRWallFunction;", "value           uniform 1;"])]),
        ("0", "epsilon"): field(EPSDIM, "uniform 200", fixed(["inlet"], "uniform 200") + zero_grad(["outlet"]) + [("walls", ["type            epsilonWallFunction;", "value           uniform 200;"])]),
        ("0", "nut"): field("[1 -1 -1 0 0 0 0]", "uniform 0", zero_grad(["inlet", "outlet"]) + [("walls", ["type            nutkWallFunction;", "value           uniform 0;"])]),
        ("0", "alphat"): field("[1 -1 -1 0 0 0 0]", "uniform 0", zero_grad(["inlet", "outlet"]) + [("walls", ["type            compressible::alphatWallFunction;", "value           uniform 0;"])]),
    }


def poiseuille_files(cells, stress_model="Maxwell"):
    patches = ["left", "right", "walls", "centreline"]
    return {
        ("system", "controlDict"): control_dict("pimpleFoam", 0.25, 0.005, 0.05, "latestTime"),
        ("system", "fvSchemes"): fv_schemes(),
        ("system", "fvSolution"): fv_solution("\nPIMPLE\n{\n    momentumPredictor no;\n    nOuterCorrectors 15;\n    nCorrectors     3;\n}\n"),
        ("system", "blockMeshDict"): block_mesh(cells, [("left", "cyclic", ["(0 4 7 3)"], ["neighbourPatch right;"]), ("right", "cyclic", ["(1 2 6 5)"], ["neighbourPatch left;"]), ("walls", "wall", ["(0 1 5 4)"], []), ("centreline", "symmetryPlane", ["(3 7 6 2)"], []), ("frontAndBack", "empty", ["(0 3 2 1)", "(4 5 6 7)"], [])]),
        ("system", "fvConstraints"): "momentumSource\n{\n    type            meanVelocityForce;\n    selectionMode   all;\n    Ubar            (1 0 0);\n}\n",
        ("constant", "physicalProperties"): "viscosityModel  constant;\n\nnu              [0 2 -1 0 0 0 0] 1;\n",
        ("constant", "momentumTransport"): f"simulationType  laminar;\n\nlaminar\n{{\n    model           {stress_model};\n\n    MaxwellCoeffs\n    {{\n        nuM             1;\n        lambda          5;\n    }}\n\n    printCoeffs     on;\n}}\n",
        ("0", "U"): field(VEL, "uniform (0 0 0)", [("left", ["type            cyclic;"]), ("right", ["type            cyclic;"]), ("walls", ["type            noSlip;"]), ("centreline", ["type            symmetryPlane;"])] + empty_fb()),
        ("0", "p"): field(PRES, "uniform 0", [("left", ["type            cyclic;"]), ("right", ["type            cyclic;"]), ("walls", ["type            zeroGradient;"]), ("centreline", ["type            symmetryPlane;"])] + empty_fb()),
        ("0", "sigma"): field(PRES, "uniform (0 0 0 0 0 0)", [("left", ["type            cyclic;"]), ("right", ["type            cyclic;"]), ("walls", ["type            zeroGradient;"]), ("centreline", ["type            symmetryPlane;"])] + empty_fb()),
    }


def counterflow_files(cells):
    pat = ["fuel", "air", "outlet"]
    species = {
        "CH4": ("uniform 0", [("fuel", ["type            fixedValue;", "value           uniform 1;"]), ("air", ["type            fixedValue;", "value           uniform 0;"]), ("outlet", ["type            inletOutlet;", "inletValue      uniform 0;"])]),
        "O2": ("uniform 0.23", [("fuel", ["type            fixedValue;", "value           uniform 0;"]), ("air", ["type            fixedValue;", "value           uniform 0.23;"]), ("outlet", ["type            inletOutlet;", "inletValue      uniform 0.23;"])]),
        "N2": ("uniform 0.77", [("fuel", ["type            fixedValue;", "value           uniform 0;"]), ("air", ["type            fixedValue;", "value           uniform 0.77;"]), ("outlet", ["type            inletOutlet;", "inletValue      uniform 0.77;"])]),
    }
    files = {
        ("system", "controlDict"): control_dict("reactingFoam", 0.5, 1e-06, 0.05),
        ("system", "fvSchemes"): fv_schemes("Gauss limitedLinearV 1"),
        ("system", "fvSolution"): fv_solution("\nPIMPLE\n{\n    momentumPredictor no;\n    nOuterCorrectors 1;\n    nCorrectors     2;\n}\n"),
        ("system", "blockMeshDict"): block_mesh(cells, [("fuel", "patch", ["(0 4 7 3)"], []), ("air", "patch", ["(1 2 6 5)"], []), ("outlet", "patch", ["(0 1 5 4)", "(3 7 6 2)"], []), ("frontAndBack", "empty", ["(0 3 2 1)", "(4 5 6 7)"], [])], ["(0 -0.01 0)", "(0.02 -0.01 0)", "(0.02 0.01 0)", "(0 0.01 0)", "(0 -0.01 0.02)", "(0.02 -0.01 0.02)", "(0.02 0.01 0.02)", "(0 0.01 0.02)"]),
        ("constant", "physicalProperties"): "thermoType\n{\n    type            hePsiThermo;\n    mixture         multiComponentMixture;\n    transport       sutherland;\n    thermo          janaf;\n    energy          sensibleEnthalpy;\n    equationOfState perfectGas;\n    specie          specie;\n}\n\n#include \"thermo.compressibleGas\"\n",
        ("constant", "momentumTransport"): "simulationType  laminar;\n",
        ("constant", "combustionProperties"): "combustionModel laminar;\n\nlaminarCoeffs\n{\n    integrateReactionRate yes;\n}\n",
        ("constant", "reactions"): "reactions\n{\n    methaneReaction\n    {\n        type            irreversibleArrhenius;\n        reaction        \"CH4 + 2O2 = CO2 + 2H2O\";\n        A               5.2e16;\n        beta            0;\n        Ta              14906;\n    }\n}\n",
        ("0", "U"): field(VEL, "uniform (0 0 0)", fixed(["fuel"], "uniform (0.1 0 0)") + fixed(["air"], "uniform (-0.1 0 0)") + [("outlet", ["type            pressureInletOutletVelocity;", "value           $internalField;"])] + empty_fb()),
        ("0", "p"): field("[1 -1 -2 0 0 0 0]", "uniform 1e5", zero_grad(["fuel", "air"]) + fixed(["outlet"], "uniform 1e5") + empty_fb()),
        ("0", "T"): field(TDIM, "uniform 2000", fixed(["fuel", "air"], "uniform 293") + [("outlet", ["type            inletOutlet;", "inletValue      uniform 293;"])] + empty_fb()),
        ("0", "Ydefault"): field("[0 0 0 0 0 0 0]", "uniform 0", fixed(["fuel", "air"], "uniform 0") + [("outlet", ["type            inletOutlet;", "inletValue      uniform 0;"])] + empty_fb()),
    }
    for name, (internal, bnd) in species.items():
        files[("0", name)] = field("[0 0 0 0 0 0 0]", internal, bnd + empty_fb())
    return files


def buoyant_files(dt_k):
    hot, cold = 288.15 + dt_k / 2, 288.15 - dt_k / 2
    walls = ["frontAndBack", "topAndBottom", "hot", "cold"]
    def wall_fn(fn, value):
        return [(w, [f"type            {fn};", f"value           uniform {value};"]) for w in walls]
    return {
        ("system", "controlDict"): control_dict("buoyantFoam", 1000, 1, 50),
        ("system", "fvSchemes"): fv_schemes("bounded Gauss limitedLinear 0.2"),
        ("system", "fvSolution"): fv_solution("\nPIMPLE\n{\n    momentumPredictor yes;\n    nOuterCorrectors 1;\n    nCorrectors     2;\n}\n"),
        ("system", "blockMeshDict"): block_mesh("35 150 15", [("frontAndBack", "wall", ["(1 5 4 0)", "(3 7 6 2)"], []), ("topAndBottom", "wall", ["(4 5 6 7)", "(0 3 2 1)"], []), ("hot", "wall", ["(6 5 1 2)"], []), ("cold", "wall", ["(4 7 3 0)"], [])], ["(0 0 -260)", "(76 0 -260)", "(76 2180 -260)", "(0 2180 -260)", "(0 0 260)", "(76 0 260)", "(76 2180 260)", "(0 2180 260)"]).replace("convertToMeters 1;", "convertToMeters 0.001;"),
        ("constant", "physicalProperties"): "thermoType\n{\n    type            heRhoThermo;\n    mixture         pureMixture;\n    transport       const;\n    thermo          hConst;\n    equationOfState perfectGas;\n    specie          specie;\n    energy          sensibleEnthalpy;\n}\n\nmixture\n{\n    specie\n    {\n        molWeight       28.9;\n    }\n    thermodynamics\n    {\n        Cp              1000;\n        Hf              0;\n    }\n    transport\n    {\n        mu              1.8e-05;\n        Pr              0.7;\n    }\n}\n",
        ("constant", "momentumTransport"): "simulationType  RAS;\n\nRAS\n{\n    model           kOmegaSST;\n    turbulence      on;\n    printCoeffs     on;\n}\n",
        ("constant", "g"): "dimensions      [0 1 -2 0 0 0 0];\nvalue           (0 -9.81 0);\n",
        ("constant", "pRef"): "dimensions      [1 -1 -2 0 0 0 0];\nvalue           1e5;\n",
        ("0", "U"): field(VEL, "uniform (0 0 0)", [(w, ["type            noSlip;"]) for w in walls]),
        ("0", "p"): field("[1 -1 -2 0 0 0 0]", "uniform 1e5", [(w, ["type            calculated;", "value           $internalField;"]) for w in walls]),
        ("0", "p_rgh"): field("[1 -1 -2 0 0 0 0]", "uniform 0", [(w, ["type            fixedFluxPressure;", "value           $internalField;"]) for w in walls]),
        ("0", "T"): field(TDIM, "uniform 293", zero_grad(["frontAndBack", "topAndBottom"]) + fixed(["hot"], f"uniform {hot:g}") + fixed(["cold"], f"uniform {cold:g}")),
        ("0", "k"): field(KDIM, "uniform 3.75e-04", wall_fn("kqRWallFunction", "3.75e-04")),
        ("0", "omega"): field("[0 0 -1 0 0 0 0]", "uniform 0.12", wall_fn("omegaWallFunction", "0.12")),
        ("0", "nut"): field("[0 2 -1 0 0 0 0]", "uniform 0", wall_fn("nutUWallFunction", "0")),
        ("0", "alphat"): field("[1 -1 -1 0 0 0 0]", "uniform 0", wall_fn("compressible::alphatJayatillekeWallFunction", "0")),
    }


TUTORIALS = {
    "DNS/dnsFoam/boxTurb16": (hit_files(16), hit_allrun()),
    "incompressible/pisoFoam/LES/pitzDaily": (pitz_files(10), simple_allrun()),
    "incompressible/pisoFoam/RAS/cavity": (cavity_ras_files("20 20 1", "kEpsilon"), simple_allrun()),
    "incompressible/icoFoam/cavity/cavity": (ico_cavity_files(1), simple_allrun()),
    "compressible/rhoSimpleFoam/squareBendLiq": (square_bend_files(500, 1, 50), simple_allrun()),
    "incompressible/pimpleFoam/laminar/planarPoiseuille": (poiseuille_files("1 40 1"), simple_allrun()),
    "combustion/reactingFoam/laminar/counterFlowFlame2D": (counterflow_files("100 40 1"), simple_allrun()),
    "heatTransfer/buoyantFoam/buoyantCavity": (buoyant_files(19.6), simple_allrun()),
}
