"""Embedded Tracy-Widom order-1 quantile table.

Generated by scripts/generate_tw_table.py: CDF evaluated as the
Fredholm determinant of the kernel Ai((x+y)/2)/2 on L^2(s, inf)
(Gauss-Legendre discretization), inverted by bracketed root-finding,
and cross-validated against a Painleve II (Hastings-McLeod) solve
to 5e-06 before being written. Do not edit by hand.
"""

LEVELS = (
    0.001,
    0.0025,
    0.005,
    0.0075,
    0.01,
    0.02,
    0.03,
    0.04,
    0.05,
    0.06,
    0.07,
    0.08,
    0.09,
    0.1,
    0.11,
    0.12,
    0.13,
    0.14,
    0.15,
    0.16,
    0.17,
    0.18,
    0.19,
    0.2,
    0.21,
    0.22,
    0.23,
    0.24,
    0.25,
    0.26,
    0.27,
    0.28,
    0.29,
    0.3,
    0.31,
    0.32,
    0.33,
    0.34,
    0.35,
    0.36,
    0.37,
    0.38,
    0.39,
    0.4,
    0.41,
    0.42,
    0.43,
    0.44,
    0.45,
    0.46,
    0.47,
    0.48,
    0.49,
    0.5,
    0.51,
    0.52,
    0.53,
    0.54,
    0.55,
    0.56,
    0.57,
    0.58,
    0.59,
    0.6,
    0.61,
    0.62,
    0.63,
    0.64,
    0.65,
    0.66,
    0.67,
    0.68,
    0.69,
    0.7,
    0.71,
    0.72,
    0.73,
    0.74,
    0.75,
    0.76,
    0.77,
    0.78,
    0.79,
    0.8,
    0.81,
    0.82,
    0.83,
    0.84,
    0.85,
    0.86,
    0.87,
    0.88,
    0.89,
    0.9,
    0.91,
    0.92,
    0.93,
    0.94,
    0.95,
    0.96,
    0.97,
    0.98,
    0.99,
    0.995,
    0.9975,
    0.999,
)

VALUES = (
    -4.654198244421166,
    -4.37773183588163,
    -4.1478765020903765,
    -4.003298642735005,
    -3.8954326730641395,
    -3.614057143230644,
    -3.4323769918458336,
    -3.29402124328517,
    -3.180379976937723,
    -3.0828574656177357,
    -2.9967348031620786,
    -2.9191264202134635,
    -2.848131570640007,
    -2.7824279056953016,
    -2.7210560585773225,
    -2.6632964547054043,
    -2.608594556170431,
    -2.5565132801483714,
    -2.5067015004314572,
    -2.4588724980827634,
    -2.4127887999553574,
    -2.3682512509294407,
    -2.325090970249115,
    -2.2831633202333195,
    -2.24234330907817,
    -2.2025220349806265,
    -2.1636038991502606,
    -2.1255043951600947,
    -2.088148336215511,
    -2.051468419290988,
    -2.0154040513242144,
    -1.9799003813655045,
    -1.9449074961174349,
    -1.9103797461992817,
    -1.876275177836853,
    -1.8425550501720394,
    -1.8091834225662102,
    -1.7761267994567111,
    -1.743353822784439,
    -1.710835003922196,
    -1.6785424885284523,
    -1.6464498489293307,
    -1.6145318995706477,
    -1.5827645318209584,
    -1.5511245650080543,
    -1.5195896110485396,
    -1.4881379504132513,
    -1.456748417487183,
    -1.4254002936249326,
    -1.3940732064040606,
    -1.362747033738762,
    -1.3314018116320656,
    -1.300017644439646,
    -1.2685746165810925,
    -1.2370527046739601,
    -1.205431689083507,
    -1.1736910638749407,
    -1.14180994412857,
    -1.1097669695280037,
    -1.0775402030557448,
    -1.0451070235337676,
    -1.0124440106062953,
    -0.979526820604371,
    -0.9463300515172255,
    -0.9128270950391693,
    -0.8789899733439394,
    -0.8447891578468414,
    -0.8101933667368306,
    -0.775169337465371,
    -0.7396815696520277,
    -0.7036920329554333,
    -0.6671598333297104,
    -0.6300408296631624,
    -0.5922871910160805,
    -0.5538468823943736,
    -0.5146630640997522,
    -0.4746733859599662,
    -0.43380915288226496,
    -0.3919943318183047,
    -0.34914436180770436,
    -0.30516471752179297,
    -0.25994916152432584,
    -0.2133775996693283,
    -0.16531342523491127,
    -0.1156001968747196,
    -0.0640574376280306,
    -0.010475258227206522,
    0.04539261635367462,
    0.10383802594753887,
    0.16521065901866708,
    0.22993480115713016,
    0.2985326609436786,
    0.3716576577598513,
    0.45014328905822437,
    0.5350772940117384,
    0.6279187637766231,
    0.7306922034217905,
    0.8463289810467681,
    0.97931605346954,
    1.1370612997247445,
    1.3332134783486842,
    1.5977556741253045,
    2.0234492813801204,
    2.4223265858961964,
    2.7997914402362554,
    3.272196059001107,
)
