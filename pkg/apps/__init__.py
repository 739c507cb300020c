'''Intentionally empty. The sweep application lives alongside this file; see https://docs.python.org/3/tutorial/modules.html#packages'''
