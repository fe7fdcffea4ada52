"""
Predicting a circling tank from two radar fixes
===============================================

A target turns at a steady rate. From two consecutive poses we recover its
circle, aim a bullet at where it will be, and replay the shot tick by tick.
"""
import math

from tankgame.engine import Command, PhysicsConstants, step_pose
from tankgame.geometry import fit_arc, Pose, solve_intercept

phys = PhysicsConstants()

# target: 6 units/tick, turning 5 degrees per tick, about 300 units away
x, y, h, v = 300.0, 150.0, 1.2, 6.0
cmd = Command(6.0, math.radians(5))
x1, y1, h1, _ = step_pose(x, y, h, v, cmd, phys)

path = fit_arc(Pose(x, y, h), Pose(x1, y1, h1), dt=1)
print(f"fitted circle: centre ({path.cx:.1f}, {path.cy:.1f}), radius {path.radius:.2f}, "
      f"{math.degrees(path.angular_rate):.2f} deg/tick")

# a power-2 shot from the origin
power = 2.0
speed = phys.bullet_speed(power)
sol = solve_intercept((0.0, 0.0), Pose(x1, y1, h1), v, path, speed)
print(f"fire at {math.degrees(sol.fire_angle):.2f} deg, hits after {sol.time_to_hit:.2f} ticks")

# replay: step the target with the engine and the bullet along its ray
tx, ty, th, tv = x1, y1, h1, v
for k in range(1, math.ceil(sol.time_to_hit) + 1):
    bx = k * speed * math.cos(sol.fire_angle)
    by = k * speed * math.sin(sol.fire_angle)
    gap = math.hypot(bx - tx, by - ty)
    print(f"tick {k:>2}: bullet ({bx:7.1f}, {by:7.1f})  target ({tx:7.1f}, {ty:7.1f})  gap {gap:6.1f}")
    tx, ty, th, tv = step_pose(tx, ty, th, tv, cmd, phys)
