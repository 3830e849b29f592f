"""Values computed by generate.py; regenerate, do not edit."""

K0_X1_SIMPSON = 0.4210244382407083
KI1_X1_TRAP = 0.2894280370259921
OSC_SINH_SIN_PI = -0.010354450467282271
YOR_DIRECT_R1_T1_TRAP = 1.4781530626064645
K0_X1_MP = 0.42102443824070834
K_HALF_X2_MP = 0.11993777196806145
KI1_X1_MP = 0.2894280370259921
KI1_X2_MP = 0.09238545989039118
KI2_X001_MP = -0.07383484193838429
KI5_X2_MP = -0.00034633788080657145
I1_X2_SERIES60 = 1.590636854637329
F_R1_T1 = 1.4781530626064638
F_R1_T2 = 0.4101005072600966
F_R2_T2 = 0.09090973558815608
F_R1_T05 = 0.9434798878266034
IMAGE_CONST_TAU1 = 0.6260201656260738
IMAGE_EXP_TAU1 = 0.27202905498213314
H_T1_X1_Y2 = 0.09411702433334304
CONV_EXP_EXP_X1 = 0.0592588543275843
A1_R1_T2 = -0.0729239327510129
P3_AT_2 = -62.0
A_12_12 = 316234143225
A_25_25 = -58435841445947272053455474390625
GEN_X1_T05_N12 = 0.8801825364760372
GEN_X2_T1_N20 = 0.3375096185627437
