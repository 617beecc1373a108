"""Iterative Tarjan strongly connected components."""

from __future__ import annotations


def tarjan_sccs(n_states: int, successors: list[list[int]]) -> list[list[int]]:
    """Components emitted sinks-first (reverse topological order)."""
    index = [-1] * n_states
    lowlink = [0] * n_states
    on_stack = [False] * n_states
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0

    for root in range(n_states):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, child_i = work[-1]
            if child_i == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            succ = successors[v]
            while child_i < len(succ):
                w = succ[child_i]
                child_i += 1
                if index[w] == -1:
                    work[-1] = (v, child_i)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return sccs
